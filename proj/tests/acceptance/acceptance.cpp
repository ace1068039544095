// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ipress/flows.hpp"
#include "ipress/group.hpp"
#include "ipress/loops.hpp"
#include "ipress/pressure.hpp"
#include "ipress/properties.hpp"
#include "oracles.hpp"
#include "run.hpp"

using namespace ipress;
using namespace ipress::cli;

namespace {

struct Verdict {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double value_of(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>() == "inf" ? INFINITY : -INFINITY;
  return NAN;
}

void criterion1(Verdict& v) {
  const auto t0 = Clock::now();
  const Report r = run(find_fixture("alpha-farey")->config);
  const double dt = seconds_since(t0);
  const double x = value_of(r.payload["result"]["value"]);
  v.detail << "P_psi(0, loops at 1) = " << x << ", error " << x - 1.0 << ", " << dt << " s";
  v.require(std::abs(x - 1.0) <= 1e-6, "|P - 1| <= 1e-6");
  v.require(dt < 1.0, "runtime < 1 s");
}

void criterion2(Verdict& v) {
  RunConfig c = find_fixture("alpha-farey")->config;
  c.psi = "one";
  const auto t0 = Clock::now();
  const Report r = run(c);
  const double dt = seconds_since(t0);
  const double x = value_of(r.payload["result"]["value"]);
  v.detail << "t(0) = " << x << ", error " << x - std::log(2.0) << ", " << dt << " s";
  v.require(std::abs(x - std::log(2.0)) <= 1e-9, "|t(0) - log 2| <= 1e-9");
  v.require(dt < 1.0, "runtime < 1 s");
}

void criterion3(Verdict& v) {
  const auto spec = ShiftSpec::renewal();
  const auto trunc = truncate_prefix(spec, 1500);
  for (double beta : {0.25, 0.5, 0.75}) {
    const auto phi = combine(Potential::zero(), Potential::alpha_farey_geometric(), {0.0, -beta});
    const auto r = pseudo_inverse_pressure(trunc, phi, Potential::constant(1.0), WordCollection::periodic_at(1));
    const auto o = oracle::harmonic_series_root(beta);
    const double mid = 0.5 * (o.lower + o.upper);
    v.detail << " beta=" << beta << ": " << r.value << " vs " << mid << " (diff " << r.value - mid << ")";
    v.require(r.value >= o.lower - 1e-8 && r.value <= o.upper + 1e-8, "within 1e-8 of the series root");
  }
}

void criterion4(Verdict& v) {
  const ExtensionShift z(GroupModel::z_power(1), ExtensionVariant::Plain);
  const auto closed = return_counts(z, 128);
  const auto first = count_first_returns(z, 64);
  bool bridges = true, loops = true;
  for (unsigned n = 1; n <= 64; ++n) bridges = bridges && closed[2 * n] == oracle::binomial(2 * n, n);
  for (unsigned n = 1; n <= 32; ++n) loops = loops && first[2 * n] == 2 * oracle::binomial(2 * n - 2, n - 1) / n;
  v.require(bridges, "bridge counts = binom(2n, n), n <= 64");
  v.require(loops, "simple loops = (2/n) binom(2n-2, n-1), n <= 32");
  double previous = -INFINITY;
  for (std::size_t cap : {100u, 1000u, 10000u}) {
    const auto r = loop_pressure(bridge_inventory(z, cap), Potential::zero(), Potential::constant(1.0));
    v.detail << " L=" << cap << ": " << r.value;
    v.require(r.value >= previous, "monotone in L");
    previous = r.value;
    if (cap == 10000) {
      v.require(r.value >= std::log(2.0) - 0.01 && r.value <= std::log(2.0), "L = 1e4 in [log 2 - 0.01, log 2]");
    }
  }
  v.detail << "; counts exact";
}

void criterion5(Verdict& v) {
  {
    const auto t0 = Clock::now();
    const Report r = run(find_fixture("z-srw")->config);
    const double dt = seconds_since(t0);
    const auto& g = r.payload["gap"];
    v.detail << "Z: gap " << value_of(g["gap"]) << " " << g["verdict"].get<std::string>() << " (" << dt << " s)";
    v.require(value_of(g["gap"]) <= 0.01, "Z gap <= 0.01");
    v.require(g["verdict"] == "Amenable-consistent", "Z verdict");
    v.require(dt < 30.0, "Z runtime < 30 s");
  }
  {
    // Kesten: the simple random walk on the 4-regular tree returns with
    // rate sqrt 3 / 2, so closed paths grow like 4 sqrt 3 / 2 = 2 sqrt 3.
    const double kesten = std::log(4.0 * std::sqrt(3.0) / 2.0);
    const ExtensionShift f2(GroupModel::free_group(2), ExtensionVariant::Plain);
    CountOptions slow;
    slow.use_fast_paths = false;
    v.require(return_counts(f2, 12) == return_counts(f2, 12, slow), "distance DP = direct DP for n <= 12");
    const auto t0 = Clock::now();
    const Report r = run(find_fixture("free-group-2")->config);
    const double dt = seconds_since(t0);
    const auto& g = r.payload["gap"];
    const double est = value_of(g["P_Cprime_estimate"]);
    v.detail << "; F2: estimate " << est << " vs " << kesten << " " << g["verdict"].get<std::string>() << " (" << dt
             << " s)";
    v.require(std::abs(est - kesten) <= 0.01, "F2 estimate within 0.01 of log(2 sqrt 3)");
    v.require(g["verdict"] == "Nonamenable-consistent", "F2 verdict");
    v.require(dt < 30.0, "F2 runtime < 30 s");
  }
}

void criterion6(Verdict& v) {
  double worst_inducing = 0.0, worst_across = 0.0;
  for (std::uint64_t seed = 6000; seed < 6020; ++seed) {
    const auto fx = random_fixture(seed, 4, true);
    double lo = INFINITY, hi = -INFINITY;
    for (Symbol a = 1; a <= 4; ++a) {
      const auto pseudo = pseudo_inverse_pressure(fx.trunc, fx.phi, fx.psi, WordCollection::periodic_at(a));
      const auto lp = loop_pressure(series_inventory(fx.trunc, a, 10'000), fx.phi, fx.psi);
      worst_inducing = std::max(worst_inducing, std::abs(lp.value - pseudo.value));
      lo = std::min(lo, lp.value);
      hi = std::max(hi, lp.value);
    }
    worst_across = std::max(worst_across, hi - lo);
  }
  v.detail << "worst |loop - pseudo| " << worst_inducing << ", worst spread over a " << worst_across;
  v.require(worst_inducing <= 1e-8, "inducing invariance within 1e-8");
  v.require(worst_across <= 1e-8, "independence of a within 1e-8");
}

void criterion7(Verdict& v) {
  const auto t0 = Clock::now();
  std::vector<std::vector<PropertyOutcome>> runs;
  for (std::uint64_t seed = 7000; seed < 7050; ++seed) runs.push_back(run_property_suite(random_fixture(seed), 1e-9));
  const double dt = seconds_since(t0);
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& o : merge_outcomes(runs)) {
    worst = std::max(worst, o.worst);
    checks += o.checks;
    v.require(o.passed, o.name + " " + o.detail);
  }
  v.detail << checks << " checks on 50 fixtures, worst violation " << worst << ", " << dt << " s";
  v.require(dt < 10.0, "runtime < 10 s");
}

// Independent residual from a dense eigendecomposition.
double dense_variational_residual(const RandomFixture& fx, double beta) {
  const auto m = oracle::weighted(fx.matrix, fx.phi_values, fx.psi_values, beta);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    if (es.eigenvalues()(i).real() > es.eigenvalues()(top).real()) top = i;
  }
  const double lambda = es.eigenvalues()(top).real();
  Eigen::VectorXd r = es.eigenvectors().col(top).real().cwiseAbs();
  Eigen::EigenSolver<Eigen::MatrixXd> et(m.transpose());
  Eigen::Index ttop = 0;
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    if (et.eigenvalues()(i).real() > et.eigenvalues()(ttop).real()) ttop = i;
  }
  Eigen::VectorXd l = et.eigenvectors().col(ttop).real().cwiseAbs();
  Eigen::VectorXd pi = l.cwiseProduct(r);
  pi /= pi.sum();
  double h = 0.0, phi = 0.0, psi = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    phi += pi(i) * fx.phi_values[i];
    psi += pi(i) * fx.psi_values[i];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      const double p = m(i, j) * r(j) / (lambda * r(i));
      if (p > 0.0) h -= pi(i) * p * std::log(p);
    }
  }
  return h + phi - beta * psi;
}

void criterion8(Verdict& v) {
  double worst = 0.0, worst_dense = 0.0;
  for (std::uint64_t seed = 8000; seed < 8020; ++seed) {
    const auto fx = random_fixture(seed, 5, true);
    const double beta = pseudo_inverse_pressure(fx.trunc, fx.phi, fx.psi, WordCollection::all()).value;
    worst = std::max(worst, std::abs(variational_check(fx.trunc, fx.phi, fx.psi, beta).residual));
    worst_dense = std::max(worst_dense, std::abs(dense_variational_residual(fx, beta)));
  }
  v.detail << "worst residual " << worst << " (dense oracle " << worst_dense << ")";
  v.require(worst <= 1e-8, "residual within 1e-8");
  v.require(worst_dense <= 1e-8, "dense oracle residual within 1e-8");
}

void criterion9(Verdict& v) {
  const Report r = run(find_fixture("renewal-window")->config);
  const auto& res = r.payload["result"];
  const bool cert = res.contains("certificate") && !res["certificate"]["witness"].empty();
  v.require(r.divergent && value_of(res["value"]) == INFINITY, "window estimator returns +inf");
  v.require(cert, "certificate with a witnessing window");
  if (cert) {
    v.detail << "+inf, window (" << value_of(res["certificate"]["window"][0]) << ", "
             << value_of(res["certificate"]["window"][1]) << "], witness " << res["certificate"]["witness"].dump();
  }
  const auto spec = ShiftSpec::renewal();
  const auto trunc = truncate_prefix(spec, 200);
  const auto phi = Potential::first_symbol_negated();
  const auto psi = Potential::alpha_farey_geometric();
  const double all = pseudo_inverse_pressure(trunc, phi, psi, WordCollection::all()).value;
  const auto inv = enumerate_simple_loops(spec, WordCollection::periodic_at(1), trunc, 200);
  const double loops = loop_pressure(inv, phi, psi).value;
  v.detail << "; N=200: all words " << all << ", loops at 1 " << loops;
  v.require(std::abs(all - loops) <= 0.01, "all words and loops at 1 agree within 0.01");
}

void criterion10(Verdict& v) {
  const auto base = ShiftSpec::full(2);
  const auto t = truncate_all(base);
  const double h1 = savchenko_entropy(base, Potential::constant(1.0), t).value;
  const double h2 = savchenko_entropy(base, Potential::constant(2.0), t).value;
  v.detail << "tau=1: " << h1 - std::log(2.0) << ", tau=2: " << h2 - std::log(2.0) / 2.0;
  v.require(std::abs(h1 - std::log(2.0)) <= 1e-10, "tau = 1 gives log 2");
  v.require(std::abs(h2 - std::log(2.0) / 2.0) <= 1e-10, "tau = 2 gives log 2 / 2");
  double worst = 0.0;
  for (std::uint64_t seed = 10'000; seed < 10'010; ++seed) {
    const auto fx = random_fixture(seed, 5);
    const double p0 = flow_pressure(FlowSpec{fx.spec, fx.psi, Potential::zero()}, fx.trunc).value;
    for (double c : {-1.0, 0.5}) {
      const FlowSpec shifted{fx.spec, fx.psi, combine(Potential::zero(), fx.psi, {0.0, c})};
      worst = std::max(worst, std::abs(flow_pressure(shifted, fx.trunc).value - (c + p0)));
    }
  }
  v.detail << "; worst |P(c) - c - P(0)| " << worst;
  v.require(worst <= 1e-9, "constant-fiber shift within 1e-9");
}

}  // namespace

int main() {
  const std::vector<std::function<void(Verdict&)>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      criteria[i](v);
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s criterion %zu: %s (%.2f s)\n", v.passed ? "PASS" : "FAIL", i + 1, v.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += v.passed ? 0 : 1;
  }
  return failed;
}
