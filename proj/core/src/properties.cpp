#include "ipress/properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"
#include "ipress/transfer.hpp"

namespace ipress {

Potential symbol_potential(const std::vector<double>& values, std::string name, bool positive) {
  std::vector<std::pair<std::vector<Symbol>, double>> rows;
  double lo = kInf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back({{static_cast<Symbol>(i + 1)}, values[i]});
    lo = std::min(lo, values[i]);
  }
  SignFlags flags;
  if (positive) {
    if (!(lo > 0.0)) throw DomainError("potential " + name + " is not positive");
    flags.nonnegative = true;
    flags.strictly_positive = true;
    flags.lower_bound = lo;
  }
  return Potential::from_table(1, rows, flags, std::move(name));
}

namespace {

bool is_irreducible(const Truncation& trunc) {
  const TransferGraph graph(trunc, 1);
  const auto comps = strongly_connected_components(graph);
  return comps.members.size() == 1 && comps.nontrivial[0];
}

}  // namespace

RandomFixture random_fixture(std::uint64_t seed, std::size_t symbols, bool irreducible) {
  if (symbols == 0) throw DomainError("fixture needs at least one symbol");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, symbols - 1);
  std::vector<std::vector<int>> m;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10'000) throw ResourceError("could not draw an irreducible fixture");
    m.assign(symbols, std::vector<int>(symbols, 0));
    for (auto& row : m) {
      for (auto& x : row) x = coin(rng) < 0.5 ? 1 : 0;
      if (std::find(row.begin(), row.end(), 1) == row.end()) row[pick(rng)] = 1;
    }
    if (!irreducible || is_irreducible(truncate_all(ShiftSpec::from_matrix(m)))) break;
  }
  std::uniform_real_distribution<double> phi_dist(-1.0, 1.0), psi_dist(0.5, 2.0);
  std::vector<double> pv(symbols), qv(symbols);
  for (auto& v : pv) v = phi_dist(rng);
  for (auto& v : qv) v = psi_dist(rng);
  auto spec = ShiftSpec::from_matrix(m);
  auto trunc = truncate_all(spec);
  return RandomFixture{seed, m, spec, trunc, symbol_potential(pv, "phi"), symbol_potential(qv, "psi", true), pv, qv};
}

// ---------------------------------------------------------------------------

namespace {

class Recorder {
 public:
  Recorder(std::string name, double tol) { out_.name = std::move(name), tol_ = tol; }

  /// Records lhs <= rhs.
  void le(double lhs, double rhs, const std::string& what) {
    ++out_.checks;
    double v = 0.0;
    if (std::isinf(lhs) || std::isinf(rhs)) {
      v = lhs <= rhs ? 0.0 : kInf;
    } else {
      v = std::max(0.0, lhs - rhs);
    }
    note(v, what);
  }
  void eq(double a, double b, const std::string& what) {
    ++out_.checks;
    const double v = (a == b) ? 0.0 : std::abs(a - b);
    note(std::isnan(v) ? kInf : v, what);
  }
  PropertyOutcome done() { return out_; }

 private:
  void note(double v, const std::string& what) {
    if (v > out_.worst) out_.worst = v;
    if (v > tol_ && out_.passed) {
      out_.passed = false;
      std::ostringstream d;
      d << what << " violated by " << v;
      out_.detail = d.str();
    }
  }
  PropertyOutcome out_;
  double tol_;
};

struct Context {
  const RandomFixture& fx;
  std::mt19937_64 rng;
  PseudoInverseOptions opts;

  double P(const Potential& phi, const Potential& psi, const WordCollection& c) {
    return pseudo_inverse_pressure(fx.trunc, phi, psi, c, opts).value;
  }
  double P(const Potential& phi, const WordCollection& c = WordCollection::all()) { return P(phi, fx.psi, c); }

  std::vector<double> draw(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(fx.phi_values.size());
    for (auto& x : v) x = d(rng);
    return v;
  }
};

Potential shifted(const std::vector<double>& base, const std::vector<double>& delta, const std::string& name,
                  bool positive = false) {
  std::vector<double> v(base);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += delta[i];
  return symbol_potential(v, name, positive);
}

}  // namespace

std::vector<PropertyOutcome> run_property_suite(const RandomFixture& fx, double tol) {
  Context cx{fx, std::mt19937_64(fx.seed ^ 0x9e3779b97f4a7c15ULL), {}};
  cx.opts.tolerance = 1e-12;
  std::vector<PropertyOutcome> out;
  const auto all = WordCollection::all();
  const double p0 = cx.P(fx.phi);
  const std::size_t n = fx.phi_values.size();

  {
    Recorder r("monotonicity-phi", tol);
    const auto phi2 = shifted(fx.phi_values, cx.draw(0.0, 0.5), "phi+");
    r.le(p0, cx.P(phi2), "P(phi) <= P(phi + d)");
    out.push_back(r.done());
  }
  {
    // A larger psi slows the time scale: the value moves toward 0 without
    // changing sign.
    Recorder r("monotonicity-psi", tol);
    const auto psi2 = shifted(fx.psi_values, cx.draw(0.0, 0.5), "psi+", true);
    const double p2 = cx.P(fx.phi, psi2, all);
    if (p0 >= 0.0) {
      r.le(0.0, p2, "0 <= P_psi2");
      r.le(p2, p0, "P_psi2 <= P_psi1");
    } else {
      r.le(p0, p2, "P_psi1 <= P_psi2");
      r.le(p2, 0.0, "P_psi2 <= 0");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("monotonicity-collection", tol);
    for (const Symbol a : fx.trunc.retained()) {
      r.le(cx.P(fx.phi, WordCollection::periodic_at(a)), p0, "P(periodic at a) <= P(all)");
    }
    r.le(cx.P(fx.phi, WordCollection::starting_in({1})), cx.P(fx.phi, WordCollection::starting_in({1, 2})),
         "P(starting in {1}) <= P(starting in {1,2})");
    out.push_back(r.done());
  }
  {
    Recorder r("monotonicity-subshift", tol);
    for (Symbol drop = 1; drop <= n; ++drop) {
      std::vector<Symbol> keep;
      for (Symbol s = 1; s <= n; ++s) {
        if (s != drop) keep.push_back(s);
      }
      const auto sub = truncate(fx.spec, keep);
      r.le(pseudo_inverse_pressure(sub, fx.phi, fx.psi, all, cx.opts).value, p0, "P on K1 <= P on K2");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("translation", tol);
    const double m = *std::min_element(fx.psi_values.begin(), fx.psi_values.end());
    const double M = *std::max_element(fx.psi_values.begin(), fx.psi_values.end());
    for (double c : {0.3, 1.0, 2.5}) {
      const double pc = cx.P(combine(fx.phi, Potential::constant(c), {1.0, 1.0}));
      r.le(p0 + c / M, pc, "P + c/M <= P(phi + c)");
      r.le(pc, p0 + c / m, "P(phi + c) <= P + c/m");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("subadditivity", tol);
    const auto phi2 = symbol_potential(cx.draw(-1.0, 1.0), "phi2");
    r.le(cx.P(combine(fx.phi, phi2, {1.0, 1.0})), p0 + cx.P(phi2), "P(phi1 + phi2) <= P(phi1) + P(phi2)");
    out.push_back(r.done());
  }
  {
    Recorder r("stability", tol);
    const double p1 = cx.P(fx.phi, WordCollection::starting_in({1}));
    const double p2 = cx.P(fx.phi, WordCollection::starting_in({2, 3}));
    r.eq(cx.P(fx.phi, WordCollection::starting_in({1, 2, 3})), std::max(p1, p2), "P(C1 u C2) = max");
    double best = -kInf, best_per = -kInf;
    for (Symbol a = 1; a <= n; ++a) {
      best = std::max(best, cx.P(fx.phi, WordCollection::starting_in({a})));
      best_per = std::max(best_per, cx.P(fx.phi, WordCollection::periodic_at(a)));
    }
    r.eq(p0, best, "P(all) = max_a P(starting in {a})");
    r.eq(p0, best_per, "P(all) = max_a P(periodic at a)");
    out.push_back(r.done());
  }
  {
    Recorder r("subhomogeneity", tol);
    for (double c : {0.5, 2.0, 3.0}) {
      const double pc = cx.P(combine(fx.phi, Potential::zero(), {c, 0.0}));
      if (c >= 1.0) r.le(pc, c * p0, "P(c phi) <= c P(phi), c >= 1");
      else r.le(c * p0, pc, "P(c phi) >= c P(phi), c <= 1");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("convexity", tol);
    const auto phi2 = symbol_potential(cx.draw(-1.0, 1.0), "phi2");
    const double p2 = cx.P(phi2);
    for (double t : {0.25, 0.5, 0.75}) {
      r.le(cx.P(combine(fx.phi, phi2, {t, 1.0 - t})), t * p0 + (1.0 - t) * p2, "convexity");
    }
    out.push_back(r.done());
  }
  {
    Recorder r("cocycle", tol);
    const auto h = symbol_potential(cx.draw(-1.0, 1.0), "h");
    const auto cob = Potential::coboundary(h);
    r.eq(cx.P(combine(fx.phi, cob, {1.0, 1.0})), p0, "P(phi + h - h o sigma) = P(phi)");
    const auto like_psi = combine(fx.psi, cob, {1.0, 1.0});
    const double zero = cx.P(Potential::zero());
    for (double t : {-1.0, 0.5, 2.0}) {
      r.eq(cx.P(combine(like_psi, Potential::zero(), {t, 0.0})), t + zero, "P(t phi) = t + P(0) for phi ~ psi");
    }
    out.push_back(r.done());
  }
  return out;
}

std::vector<PropertyOutcome> merge_outcomes(const std::vector<std::vector<PropertyOutcome>>& runs) {
  std::vector<PropertyOutcome> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& run : runs) {
    for (const auto& o : run) {
      auto [it, fresh] = slot.emplace(o.name, out.size());
      if (fresh) {
        out.push_back(o);
        continue;
      }
      auto& m = out[it->second];
      m.checks += o.checks;
      m.worst = std::max(m.worst, o.worst);
      if (m.passed && !o.passed) m.detail = o.detail;
      m.passed = m.passed && o.passed;
    }
  }
  return out;
}

}  // namespace ipress
