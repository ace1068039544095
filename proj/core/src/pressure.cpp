#include "ipress/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"

namespace ipress {

std::string to_string(Method method) {
  switch (method) {
    case Method::CriticalExponent: return "critical-exponent";
    case Method::PseudoInverse: return "pseudo-inverse";
    case Method::LoopRoute: return "loop-route";
    case Method::Exhaustion: return "exhaustion";
  }
  return "?";
}

bool PressureResult::finite() const noexcept { return std::isfinite(value); }

// ---------------------------------------------------------------------------
// Pseudo-inverse

PressureResult pseudo_inverse_pressure(const Truncation& trunc, const Potential& phi,
                                       const Potential& psi, const WordCollection& collection,
                                       const PseudoInverseOptions& options) {
  if (collection.kind() == WordCollection::Kind::Custom) {
    throw PreconditionError("pseudo-inverse pressure needs a collection with a transfer-matrix form, got " +
                            collection.describe());
  }
  PressureResult out;
  out.method = Method::PseudoInverse;
  out.diagnostics.truncation_size = trunc.size();
  if (trunc.empty()) {
    out.value = out.lower = out.upper = -kInf;
    out.diagnostics.note = "empty truncation";
    return out;
  }

  const TransferGraph graph(trunc, std::max(phi.depth(), psi.depth()));
  const auto phi_e = graph.edge_values(phi);
  const auto psi_e = graph.edge_values(psi);
  double min_psi = kInf, norm_phi = 0.0;
  for (std::size_t e = 0; e < psi_e.size(); ++e) {
    if (!(psi_e[e] > 0.0)) {
      throw PreconditionError("psi (" + psi.name() + ") is not strictly positive on the truncation");
    }
    min_psi = std::min(min_psi, psi_e[e]);
    norm_phi = std::max(norm_phi, std::fabs(phi_e[e]));
  }

  const auto comps = strongly_connected_components(graph);
  const auto which = relevant_components(graph, comps, collection);
  if (which.empty()) {
    out.value = out.lower = out.upper = -kInf;
    out.diagnostics.note = "no cycle contributes to " + collection.describe();
    return out;
  }

  std::vector<double> lw(phi_e.size());
  std::size_t perron = 0;
  ThresholdOptions topt;
  auto g = [&](double beta) {
    for (std::size_t e = 0; e < lw.size(); ++e) lw[e] = phi_e[e] - beta * psi_e[e];
    const auto r = log_spectral_radius(graph, lw, comps, which, options.perron);
    perron += r.iterations;
    return r.log_radius;
  };

  topt.center = options.center;
  // The log spectral radius lies within log(max out-degree) + max(phi - beta psi),
  // so the root is inside this radius.
  std::size_t degree = 1;
  for (std::size_t u = 0; u < graph.size(); ++u) degree = std::max(degree, graph.edge_end(u) - graph.edge_begin(u));
  topt.radius = (norm_phi + std::log(static_cast<double>(degree))) / min_psi + 1.0;
  topt.tolerance = options.tolerance;
  topt.max_expansions = options.max_expansions;
  const auto search = find_threshold(g, topt);

  out.value = search.value;
  out.lower = std::min(search.lower, search.value);
  out.upper = std::max(search.upper, search.value);
  out.diagnostics.evaluations = static_cast<std::size_t>(search.evaluations);
  if (search.status == ThresholdSearch::Status::Found) {
    out.diagnostics.residual = g(search.value);
  } else {
    out.diagnostics.note = search.status == ThresholdSearch::Status::AlwaysPositive
                               ? "no sign change within the expansion budget: +inf"
                               : "no sign change within the expansion budget: -inf";
  }
  out.diagnostics.perron_iterations = perron;
  return out;
}

// ---------------------------------------------------------------------------
// Window partition sums

namespace {

struct WindowScan {
  std::vector<LogSumExp> sums;
  std::vector<Word> witness;
  std::vector<Symbol> witness_top;
  std::size_t words = 0;
  std::size_t max_len = 0;
  bool capped = false;
};

// Birkhoff sum bookkeeping for one potential along a growing path.
class RunningSum {
 public:
  RunningSum(const Potential& p, const Truncation& trunc, bool periodic)
      : p_(p), trunc_(trunc), periodic_(periodic), m_(p.depth()) {}

  // New complete term when path grew to length n, or 0 when none.
  double new_term(const std::vector<Symbol>& path) const {
    const std::size_t n = path.size();
    if (n < m_) return 0.0;
    return p_(std::span<const Symbol>(path).subspan(n - m_, m_));
  }

  // Terms k in [n-m+1, n) that need lookahead beyond the path.
  double pending(const std::vector<Symbol>& path) {
    const std::size_t n = path.size();
    if (m_ == 1) return 0.0;
    if (periodic_) {
      std::vector<Symbol> ext(path);
      for (std::size_t k = 0; k + 1 < m_; ++k) ext.push_back(path[k % n]);
      double s = 0.0;
      for (std::size_t k = (n >= m_ ? n - m_ + 1 : 0); k < n; ++k) {
        s += p_(std::span<const Symbol>(ext).subspan(k, m_));
      }
      return s;
    }
    const std::size_t keep = std::min(n, m_ - 1);
    std::vector<Symbol> key(path.end() - static_cast<std::ptrdiff_t>(keep), path.end());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    double best = -kInf;
    std::vector<Symbol> seq = key;
    extend(seq, m_ - 1, keep, best);
    if (best == -kInf) throw ModeError("no admissible completion inside the truncation");
    memo_.emplace(std::move(key), best);
    return best;
  }

 private:
  void extend(std::vector<Symbol>& seq, std::size_t remaining, std::size_t keep, double& best) {
    if (remaining == 0) {
      double s = 0.0;
      for (std::size_t k = 0; k < keep; ++k) s += p_(std::span<const Symbol>(seq).subspan(k, m_));
      best = std::max(best, s);
      return;
    }
    auto from = trunc_.index_of(seq.back());
    if (!from) return;
    for (std::size_t j : trunc_.successors(*from)) {
      seq.push_back(trunc_.symbol(j));
      extend(seq, remaining - 1, keep, best);
      seq.pop_back();
    }
  }

  const Potential& p_;
  const Truncation& trunc_;
  bool periodic_;
  std::size_t m_;
  std::map<std::vector<Symbol>, double> memo_;
};

WindowScan scan_windows(const Truncation& trunc, const Potential& phi, const Potential& psi,
                        const WordCollection& collection, double eta,
                        const std::vector<double>& grid, std::size_t length_cap,
                        std::size_t max_words) {
  WindowScan scan;
  scan.sums.resize(grid.size());
  scan.witness.resize(grid.size());
  scan.witness_top.assign(grid.size(), 0);
  if (trunc.empty()) return scan;

  const ShiftSpec& owner = trunc.owner();
  const bool periodic = collection.kind() == WordCollection::Kind::Periodic ||
                        collection.kind() == WordCollection::Kind::PeriodicAt;
  RunningSum rphi(phi, trunc, periodic);
  RunningSum rpsi(psi, trunc, periodic);
  const double t_max = grid.back();

  std::vector<Symbol> path;
  std::vector<double> cphi, cpsi;  // complete sums per prefix length
  std::vector<Symbol> top;         // running max symbol

  auto visit = [&]() {
    const double spsi = cpsi.back() + rpsi.pending(path);
    if (spsi > t_max || !collection.contains(owner, path)) return;
    const double sphi = cphi.back() + rphi.pending(path);
    auto it = std::lower_bound(grid.begin(), grid.end(), spsi);
    for (; it != grid.end() && *it - eta < spsi; ++it) {
      const std::size_t i = static_cast<std::size_t>(it - grid.begin());
      scan.sums[i].add(sphi);
      if (top.back() > scan.witness_top[i]) {
        scan.witness_top[i] = top.back();
        scan.witness[i].symbols = path;
      }
    }
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t local) {
    path.push_back(trunc.symbol(local));
    top.push_back(std::max(top.empty() ? Symbol{0} : top.back(), path.back()));
    cphi.push_back((cphi.empty() ? 0.0 : cphi.back()) + rphi.new_term(path));
    cpsi.push_back((cpsi.empty() ? 0.0 : cpsi.back()) + rpsi.new_term(path));
    if (cpsi.back() <= t_max) {
      if (++scan.words > max_words) {
        throw ResourceError("window enumeration exceeded " + std::to_string(max_words) + " words");
      }
      scan.max_len = std::max(scan.max_len, path.size());
      visit();
      if (path.size() < length_cap) {
        for (std::size_t j : trunc.successors(local)) dfs(j);
      } else {
        scan.capped = true;
      }
    }
    path.pop_back();
    top.pop_back();
    cphi.pop_back();
    cpsi.pop_back();
  };

  for (std::size_t i = 0; i < trunc.size(); ++i) {
    if (collection.allows_first(trunc.symbol(i))) dfs(i);
  }
  return scan;
}

void check_window_inputs(const Potential& psi, double eta, const std::vector<double>& grid) {
  if (!(eta > 0.0)) throw DomainError("window width eta must be positive");
  if (grid.empty()) throw DomainError("T grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw DomainError("T grid must be positive and strictly increasing");
    }
  }
  if (!psi.flags().nonnegative && !psi.flags().positive()) {
    throw PreconditionError("window estimator needs psi declared nonnegative; " + psi.name() +
                            " carries no sign flag");
  }
}

}  // namespace

PressureResult estimate_pressure_window(const ShiftSpec& spec, const Potential& phi,
                                        const Potential& psi, const WordCollection& collection,
                                        const Truncation& trunc, const WindowOptions& options) {
  check_window_inputs(psi, options.eta, options.t_grid);
  const auto& grid = options.t_grid;

  PressureResult out;
  out.method = Method::CriticalExponent;
  out.diagnostics.note = "window";
  out.diagnostics.eta = options.eta;
  out.diagnostics.truncation_size = trunc.size();

  const auto scan = scan_windows(trunc, phi, psi, collection, options.eta, grid,
                                 options.length_cap, options.max_words);
  out.diagnostics.words_visited = scan.words;
  out.diagnostics.max_word_length = scan.max_len;
  out.diagnostics.length_capped = scan.capped;

  double tail_max = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = scan.sums[i].value() / grid[i];
    out.sequence.push_back(v);
    out.sequence_at.push_back(grid[i]);
    if (i >= grid.size() / 2) tail_max = std::max(tail_max, v);
  }
  out.value = tail_max;
  out.lower = std::min(out.sequence.back(), tail_max);
  out.upper = tail_max;

  if (spec.is_finite() || !options.divergence_probe || trunc.empty()) return out;

  // Truncation doubling: a window whose sum keeps growing as the alphabet
  // grows certifies divergence.
  const std::size_t base = trunc.size();
  std::vector<std::size_t> sizes;
  std::vector<WindowScan> scans;
  for (std::size_t k = 0; k < 4; ++k) {
    sizes.push_back(base << k);
    scans.push_back(scan_windows(truncate_prefix(spec, sizes.back()), phi, psi, collection,
                                 options.eta, grid, options.length_cap, options.max_words));
    out.diagnostics.words_visited += scans.back().words;
  }
  const double log_threshold = std::log(options.overflow_threshold);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> logs;
    for (const auto& s : scans) logs.push_back(s.sums[i].value());
    bool increasing = std::isfinite(logs[0]);
    for (std::size_t k = 1; k < logs.size(); ++k) increasing = increasing && logs[k] > logs[k - 1];
    if (!increasing) continue;
    // Increments in a common scale.
    std::vector<double> inc;
    for (std::size_t k = 1; k < logs.size(); ++k) {
      inc.push_back(std::exp(logs[k] - logs.back()) - std::exp(logs[k - 1] - logs.back()));
    }
    bool sustained = true;
    for (std::size_t k = 1; k < inc.size(); ++k) sustained = sustained && inc[k] >= options.growth_ratio * inc[k - 1];
    const bool overflow = logs.back() > log_threshold;
    if (!sustained && !overflow) continue;

    DivergenceCertificate cert;
    std::ostringstream reason;
    reason << "window (" << grid[i] - options.eta << ", " << grid[i] << "] ";
    if (overflow) {
      reason << "sum exceeds " << options.overflow_threshold;
    } else {
      reason << "sum keeps growing under truncation doubling, increments ratio >= " << options.growth_ratio;
    }
    reason << "; largest symbol in the window grows " << scans.front().witness_top[i] << " -> "
           << scans.back().witness_top[i];
    cert.reason = reason.str();
    cert.window_upper = grid[i];
    cert.eta = options.eta;
    cert.truncation_sizes = sizes;
    cert.log_sums = logs;
    cert.witness = scans.back().witness[i];
    out.certificate = std::move(cert);
    out.lower = std::isfinite(out.value) ? out.value : out.lower;
    out.value = kInf;
    out.upper = kInf;
    break;
  }
  return out;
}

PressureResult critical_exponent(const ShiftSpec& spec, const Potential& phi, const Potential& psi,
                                 const WordCollection& collection, const Truncation& trunc,
                                 double eta, double t_max, std::size_t length_cap,
                                 std::size_t max_words) {
  std::vector<double> grid;
  for (std::size_t k = 1; static_cast<double>(k) * eta <= t_max * (1 + 1e-12); ++k) {
    grid.push_back(static_cast<double>(k) * eta);
  }
  check_window_inputs(psi, eta, grid);
  (void)spec;

  const auto scan = scan_windows(trunc, phi, psi, collection, eta, grid, length_cap, max_words);
  PressureResult out;
  out.method = Method::CriticalExponent;
  out.diagnostics.note = "slope";
  out.diagnostics.eta = eta;
  out.diagnostics.truncation_size = trunc.size();
  out.diagnostics.words_visited = scan.words;
  out.diagnostics.max_word_length = scan.max_len;
  out.diagnostics.length_capped = scan.capped;

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = scan.sums[i].value();
    out.sequence.push_back(y);
    out.sequence_at.push_back(grid[i]);
    if (i >= grid.size() / 2 && std::isfinite(y)) {
      xs.push_back(grid[i]);
      ys.push_back(y);
    }
  }
  if (xs.size() < 3) {
    if (xs.empty() && scan.words == 0) {
      out.value = out.lower = out.upper = -kInf;
      return out;
    }
    throw DomainError("too few nonempty windows on the tail of the grid for a slope fit");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    sse += r * r;
  }
  const double se = std::sqrt(sse / std::max(1.0, n - 2.0) / sxx);
  out.value = slope;
  out.lower = slope - 2.0 * se;
  out.upper = slope + 2.0 * se;
  out.diagnostics.residual = std::sqrt(sse / n);
  return out;
}

// ---------------------------------------------------------------------------

PressureResult exhaustion_sequence(const ShiftSpec& spec, const Potential& phi, const Potential& psi,
                                   const WordCollection& collection,
                                   const std::vector<std::vector<Symbol>>& retained_sets,
                                   const ExhaustionOptions& options) {
  if (retained_sets.empty()) throw DomainError("exhaustion needs at least one retained set");
  PressureResult out;
  out.method = Method::Exhaustion;
  std::size_t last_size = 0;
  bool exhausts = false;
  for (const auto& set : retained_sets) {
    const auto trunc = truncate(spec, set);
    const auto r = pseudo_inverse_pressure(trunc, phi, psi, collection, options.pseudo);
    out.sequence.push_back(r.value);
    out.sequence_at.push_back(static_cast<double>(trunc.size()));
    out.diagnostics.evaluations += r.diagnostics.evaluations;
    out.diagnostics.perron_iterations += r.diagnostics.perron_iterations;
    last_size = trunc.size();
    exhausts = spec.is_finite() && trunc.size() == spec.symbols().size();
  }
  for (std::size_t k = 1; k < out.sequence.size(); ++k) {
    if (out.sequence[k] < out.sequence[k - 1] - 1e-9) {
      out.diagnostics.note = "sequence is not monotone: retained sets are not nested";
    }
  }
  out.diagnostics.truncation_size = last_size;
  out.value = out.sequence.back();
  out.lower = out.value;
  out.upper = options.upper_bound ? std::max(*options.upper_bound, out.value) : (exhausts ? out.value : kInf);
  return out;
}

// ---------------------------------------------------------------------------

VariationalCheck variational_check(const Truncation& trunc, const Potential& phi,
                                   const Potential& psi, double beta,
                                   const PerronOptions& options) {
  const TransferGraph graph(trunc, std::max(phi.depth(), psi.depth()));
  const auto phi_e = graph.edge_values(phi);
  const auto psi_e = graph.edge_values(psi);
  std::vector<double> lw(phi_e.size());
  for (std::size_t e = 0; e < lw.size(); ++e) lw[e] = phi_e[e] - beta * psi_e[e];

  const auto comps = strongly_connected_components(graph);
  const auto which = relevant_components(graph, comps, WordCollection::all());
  if (which.empty()) throw DomainError("no invariant measure: the truncation has no cycles");
  const auto rad = log_spectral_radius(graph, lw, comps, which, options);
  const std::size_t c = rad.component;
  const auto pv = perron_vectors(graph, lw, comps, c, options);

  std::vector<std::size_t> local(graph.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < pv.states.size(); ++i) local[pv.states[i]] = i;

  CompensatedSum norm;
  for (std::size_t i = 0; i < pv.states.size(); ++i) norm.add(pv.left[i] * pv.right[i]);

  CompensatedSum entropy, iphi, ipsi;
  for (std::size_t i = 0; i < pv.states.size(); ++i) {
    const std::size_t u = pv.states[i];
    const double pi = pv.left[i] * pv.right[i] / norm.value();
    for (std::size_t e = graph.edge_begin(u); e < graph.edge_end(u); ++e) {
      const std::size_t v = graph.target(e);
      if (comps.component_of[v] != c) continue;
      const std::size_t j = local[v];
      const double log_p = lw[e] + std::log(pv.right[j]) - std::log(pv.right[i]) - pv.log_radius;
      const double p = std::exp(log_p);
      entropy.add(-pi * p * log_p);
      iphi.add(pi * p * phi_e[e]);
      ipsi.add(pi * p * psi_e[e]);
    }
  }
  VariationalCheck out;
  out.beta = beta;
  out.entropy = entropy.value();
  out.phi_integral = iphi.value();
  out.psi_integral = ipsi.value();
  out.log_radius = pv.log_radius;
  out.residual = out.entropy + out.phi_integral - beta * out.psi_integral;
  return out;
}

}  // namespace ipress
