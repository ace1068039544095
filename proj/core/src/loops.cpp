#include "ipress/loops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"
#include "ipress/transfer.hpp"

namespace ipress {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a == kInf || b == kInf) return kInf;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

bool has_edge(const Truncation& t, std::size_t from, std::size_t to) { return t.edge(from, to); }

// Number of forced symbols between a state and the anchor, or kNone when the
// state branches or its forced path never reaches the anchor.
std::vector<std::size_t> forced_chains(const Truncation& t, std::size_t anchor) {
  constexpr std::size_t kUnknown = kNone - 1;
  constexpr std::size_t kVisiting = kNone - 2;
  std::vector<std::size_t> chain(t.size(), kUnknown);
  chain[anchor] = kNone;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (chain[s] != kUnknown) continue;
    stack.clear();
    std::size_t cur = s;
    long long carry;  // chain value of `cur`, -1 for the anchor itself
    bool dead = false;
    while (true) {
      if (cur == anchor) {
        carry = -1;
        break;
      }
      if (chain[cur] == kVisiting || chain[cur] == kNone) {
        dead = true;
        break;
      }
      if (chain[cur] != kUnknown) {
        carry = static_cast<long long>(chain[cur]);
        break;
      }
      auto succ = t.successors(cur);
      if (succ.size() != 1) {
        chain[cur] = kNone;
        dead = true;
        break;
      }
      chain[cur] = kVisiting;
      stack.push_back(cur);
      cur = succ[0];
    }
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      if (dead) {
        chain[u] = kNone;
      } else {
        ++carry;
        chain[u] = static_cast<std::size_t>(carry);
      }
    }
  }
  return chain;
}

struct Branch {
  std::vector<LoopRecord> records;
  bool cut = false;  // some continuation was dropped by the length cap
};

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void take() {
    if (used_.fetch_add(1, std::memory_order_relaxed) + 1 > limit_) {
      throw ResourceError("simple-loop enumeration exceeded " + std::to_string(limit_) + " loops");
    }
  }

 private:
  std::size_t limit_;
  std::atomic<std::size_t> used_{0};
};

// Depth-first search below `first`, iteratively to keep deep paths off the
// call stack.
Branch explore_periodic(const Truncation& t, std::size_t anchor, std::size_t first,
                        std::size_t max_len, const std::vector<std::size_t>& chain, Budget& budget) {
  Branch out;
  struct Frame {
    std::size_t state;
    std::size_t next;  // position in the successor list
  };
  std::vector<Frame> frames;
  std::vector<Symbol> path{t.symbol(anchor)};

  auto enter = [&](std::size_t s) -> bool {  // true when children should be explored
    path.push_back(t.symbol(s));
    const std::size_t len = path.size();
    if (chain[s] != kNone) {
      if (len + chain[s] <= max_len) {
        budget.take();
        out.records.push_back({path, chain[s]});
      } else {
        out.cut = true;
      }
      return false;
    }
    if (has_edge(t, s, anchor)) {
      budget.take();
      out.records.push_back({path, 0});
    }
    if (len >= max_len) {
      for (std::size_t j : t.successors(s)) {
        if (j != anchor) out.cut = true;
      }
      return false;
    }
    return true;
  };

  if (enter(first)) frames.push_back({first, 0});
  else path.pop_back();
  while (!frames.empty()) {
    Frame& f = frames.back();
    auto succ = t.successors(f.state);
    if (f.next == succ.size()) {
      frames.pop_back();
      path.pop_back();
      continue;
    }
    const std::size_t j = succ[f.next++];
    if (j == anchor) continue;
    if (enter(j)) {
      frames.push_back({j, 0});
    } else {
      path.pop_back();
    }
  }
  return out;
}

Branch explore_bridges(const Truncation& t, std::size_t first, const std::vector<bool>& start,
                       const std::vector<bool>& terminal, std::size_t max_len, Budget& budget) {
  Branch out;
  struct Frame {
    std::size_t state;
    std::size_t next;
  };
  std::vector<Frame> frames;
  std::vector<Symbol> path;

  auto enter = [&](std::size_t s) -> bool {
    path.push_back(t.symbol(s));
    if (terminal[s]) {
      budget.take();
      out.records.push_back({path, 0});
    }
    if (path.size() >= max_len) {
      for (std::size_t j : t.successors(s)) {
        if (!(terminal[s] && start[j])) out.cut = true;
      }
      return false;
    }
    return true;
  };

  if (enter(first)) frames.push_back({first, 0});
  else path.pop_back();
  while (!frames.empty()) {
    Frame& f = frames.back();
    auto succ = t.successors(f.state);
    if (f.next == succ.size()) {
      frames.pop_back();
      path.pop_back();
      continue;
    }
    const std::size_t j = succ[f.next++];
    if (terminal[f.state] && start[j]) continue;  // would split off a bridge
    if (enter(j)) {
      frames.push_back({j, 0});
    } else {
      path.pop_back();
    }
  }
  return out;
}

std::vector<Branch> run_branches(const std::vector<std::size_t>& firsts, unsigned threads,
                                 const std::function<Branch(std::size_t)>& work) {
  std::vector<Branch> out(firsts.size());
  if (threads <= 1 || firsts.size() < 2) {
    for (std::size_t i = 0; i < firsts.size(); ++i) out[i] = work(firsts[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < std::min<std::size_t>(threads, firsts.size()); ++k) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= firsts.size()) return;
        try {
          out[i] = work(firsts[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Word LoopInventory::expand(std::size_t i) const {
  const LoopRecord& r = loops_.at(i);
  Word w{r.head};
  if (r.chain == 0) return w;
  std::size_t cur = *trunc_->index_of(r.head.back());
  for (std::size_t k = 0; k < r.chain; ++k) {
    cur = trunc_->successors(cur)[0];
    w.symbols.push_back(trunc_->symbol(cur));
  }
  return w;
}

LoopInventory LoopInventory::aggregated(WordCollection collection, std::vector<double> log_counts,
                                        bool exhausted, std::string source) {
  if (log_counts.empty()) log_counts.push_back(-kInf);
  LoopInventory inv;
  inv.kind_ = Kind::Aggregated;
  inv.collection_ = std::move(collection);
  inv.max_length_ = log_counts.size() - 1;
  inv.exhausted_ = exhausted;
  inv.source_ = std::move(source);
  inv.log_counts_ = std::move(log_counts);
  inv.log_counts_[0] = -kInf;
  inv.complete_.assign(inv.log_counts_.size(), true);
  return inv;
}

LoopInventory enumerate_simple_loops(const ShiftSpec& spec, const WordCollection& collection,
                                     const Truncation& trunc, std::size_t max_len,
                                     const LoopOptions& options) {
  using Kind = WordCollection::Kind;
  if (collection.kind() != Kind::PeriodicAt && collection.kind() != Kind::Bridges) {
    throw PreconditionError("collection " + collection.describe() + " is not representable by loops");
  }
  if (max_len == 0) throw DomainError("loop length cap must be at least 1");

  LoopInventory inv;
  inv.kind_ = LoopInventory::Kind::Explicit;
  inv.collection_ = collection;
  inv.max_length_ = max_len;
  inv.trunc_ = trunc;
  inv.source_ = spec.name();
  inv.exhausted_ = true;

  Budget budget(options.max_loops);
  std::vector<Branch> branches;

  if (collection.kind() == Kind::PeriodicAt) {
    const auto ia = trunc.index_of(collection.anchor());
    if (ia) {
      const auto chain = forced_chains(trunc, *ia);
      if (has_edge(trunc, *ia, *ia)) {
        budget.take();
        Branch self;
        self.records.push_back({{collection.anchor()}, 0});
        branches.push_back(std::move(self));
      }
      std::vector<std::size_t> firsts;
      for (std::size_t j : trunc.successors(*ia)) {
        if (j != *ia) firsts.push_back(j);
      }
      if (max_len < 2) {
        if (!firsts.empty()) inv.exhausted_ = false;
        firsts.clear();
      }
      auto more = run_branches(firsts, options.threads, [&](std::size_t j) {
        return explore_periodic(trunc, *ia, j, max_len, chain, budget);
      });
      for (auto& b : more) branches.push_back(std::move(b));
    }
  } else {
    std::vector<bool> start(trunc.size(), false), terminal(trunc.size(), false);
    for (Symbol s : collection.start_set()) {
      if (auto i = trunc.index_of(s)) start[*i] = true;
    }
    for (Symbol s : collection.terminal_set()) {
      if (auto i = trunc.index_of(s)) terminal[*i] = true;
    }
    for (std::size_t u = 0; u < trunc.size(); ++u) {
      if (!terminal[u]) continue;
      for (std::size_t v = 0; v < trunc.size(); ++v) {
        if (start[v] && !has_edge(trunc, u, v)) {
          throw PreconditionError("bridges " + collection.describe() + " are not closed under concatenation: " +
                                  std::to_string(trunc.symbol(u)) + " -> " + std::to_string(trunc.symbol(v)) +
                                  " is not admissible");
        }
      }
    }
    std::vector<std::size_t> firsts;
    for (std::size_t u = 0; u < trunc.size(); ++u) {
      if (start[u]) firsts.push_back(u);
    }
    branches = run_branches(firsts, options.threads, [&](std::size_t u) {
      return explore_bridges(trunc, u, start, terminal, max_len, budget);
    });
  }

  for (auto& b : branches) {
    if (b.cut) inv.exhausted_ = false;
    for (auto& r : b.records) inv.loops_.push_back(std::move(r));
  }
  std::stable_sort(inv.loops_.begin(), inv.loops_.end(),
                   [](const LoopRecord& a, const LoopRecord& b) { return a.length() < b.length(); });

  inv.counts_.assign(max_len + 1, 0);
  for (const auto& r : inv.loops_) ++inv.counts_[r.length()];
  inv.log_counts_.resize(max_len + 1);
  for (std::size_t l = 0; l <= max_len; ++l) {
    inv.log_counts_[l] = inv.counts_[l] ? std::log(static_cast<double>(inv.counts_[l])) : -kInf;
  }

  // Per-length completeness.
  inv.complete_.assign(max_len + 1, false);
  if (spec.is_finite() && trunc.size() == spec.symbols().size()) {
    std::fill(inv.complete_.begin(), inv.complete_.end(), true);
  } else if (spec.loop_symbol_bound() && !trunc.empty() &&
             trunc.retained() == spec.first_symbols(trunc.size())) {
    const Symbol top = trunc.retained().back();
    for (std::size_t l = 1; l <= max_len; ++l) {
      bool ok = true;
      std::vector<Symbol> anchors = collection.start_set();
      if (collection.kind() == Kind::PeriodicAt) anchors = {collection.anchor()};
      for (Symbol s : anchors) {
        auto bound = spec.loop_symbol_bound()(s, l);
        ok = ok && bound && *bound <= top;
      }
      inv.complete_[l] = ok;
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Series form

namespace {

// Loops a -> s_1 -> ... -> s_{n-1} -> a of a finite truncation with
// s_i != a, weighted by exp of per-edge log weights.
class SeriesModel {
 public:
  SeriesModel(const Truncation& t, std::size_t anchor) : t_(t), a_(anchor), graph_(t, 1) {}

  const TransferGraph& graph() const { return graph_; }

  struct Evaluation {
    double log_sum = -kInf;   ///< over lengths <= used
    double log_tail = -kInf;        ///< certified bound on the remaining lengths
    double log_tail_lower = -kInf;  ///< certified lower bound on the same
    std::size_t used = 0;
    std::vector<double> per_length;  ///< log contribution per length, when requested
  };

  Evaluation evaluate(const std::vector<double>& lw, std::size_t max_len, double relative_tail,
                      bool keep_lengths) const {
    const std::size_t n = t_.size();
    Evaluation ev;
    if (keep_lengths) ev.per_length.assign(max_len + 1, -kInf);
    LogSumExp z;

    double self = -kInf, m0 = -kInf, mc = -kInf, mq = -kInf;
    std::vector<double> into(n, -kInf);  // log weight s -> a
    for (std::size_t e = graph_.edge_begin(a_); e < graph_.edge_end(a_); ++e) {
      if (graph_.target(e) == a_) self = lw[e];
      else m0 = std::max(m0, lw[e]);
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (s == a_) continue;
      for (std::size_t e = graph_.edge_begin(s); e < graph_.edge_end(s); ++e) {
        if (graph_.target(e) == a_) {
          into[s] = lw[e];
          mc = std::max(mc, lw[e]);
        } else {
          mq = std::max(mq, lw[e]);
        }
      }
    }
    if (self != -kInf && max_len >= 1) {
      z.add(self);
      if (keep_lengths) ev.per_length[1] = self;
    }
    ev.used = std::min<std::size_t>(max_len, 1);

    std::vector<double> x(n, 0.0), y(n, 0.0);
    double scale = m0;
    if (m0 == -kInf) {  // the anchor only returns to itself
      ev.log_sum = z.value();
      ev.log_tail = -kInf;
      ev.used = max_len;
      return ev;
    }
    for (std::size_t e = graph_.edge_begin(a_); e < graph_.edge_end(a_); ++e) {
      if (graph_.target(e) != a_) x[graph_.target(e)] = std::exp(lw[e] - m0);
    }
    std::vector<double> cw(n, 0.0), qw(lw.size(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (s != a_ && into[s] != -kInf) cw[s] = std::exp(into[s] - mc);
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (s == a_) continue;
      for (std::size_t e = graph_.edge_begin(s); e < graph_.edge_end(s); ++e) {
        if (graph_.target(e) != a_) qw[e] = std::exp(lw[e] - mq);
      }
    }

    // Positive v with Qv <= r v (Collatz), for the geometric tail bound.
    std::vector<double> v(n, 1.0);
    double log_r = -kInf, log_gamma = -kInf;
    if (mq != -kInf) {
      for (int it = 0; it < 200; ++it) {
        multiply(qw, v, y);
        const double top = *std::max_element(y.begin(), y.end());
        for (std::size_t s = 0; s < n; ++s) v[s] = (top > 0 ? y[s] / top : 0.0) + 1e-12;
        v[a_] = 0.0;
      }
      multiply(qw, v, y);
      double r = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        if (s != a_) r = std::max(r, y[s] / v[s]);
      }
      log_r = r > 0 ? std::log(r) + mq : -kInf;
    } else {
      for (std::size_t s = 0; s < n; ++s) v[s] = s == a_ ? 0.0 : 1.0;
    }
    if (mc != -kInf) {
      double g = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        if (s != a_) g = std::max(g, cw[s] / v[s]);
      }
      log_gamma = std::log(g) + mc;
    }

    // Sharper certificate on small truncations: u > 0 with (I - Q) u >= c
    // gives rho(Q) < 1 and sum_j Q^j c <= u.
    Resolvent res;
    if (mc != -kInf && n <= kDenseCertificate) res = resolvent_bounds(qw, mq, cw);
    const auto& u = res.upper;

    auto tail_bound = [&]() {
      if (mc == -kInf) return -kInf;
      if (!u.empty()) {
        double xu = 0.0;
        for (std::size_t s = 0; s < n; ++s) xu += x[s] * u[s];
        return xu > 0.0 ? std::log(xu) + scale + mc : -kInf;
      }
      double xv = 0.0;
      for (std::size_t s = 0; s < n; ++s) xv += x[s] * v[s];
      if (xv == 0.0) return -kInf;
      if (!(log_r < 0.0)) return kInf;
      return log_gamma + std::log(xv) + scale - std::log1p(-std::exp(log_r));
    };
    auto tail_lower = [&]() {
      if (res.lower.empty()) return -kInf;
      double xw = 0.0;
      for (std::size_t s = 0; s < n; ++s) xw += x[s] * res.lower[s];
      return xw > 0.0 ? std::log(xw) + scale + mc : -kInf;
    };

    bool vanished = false;
    for (std::size_t len = 2; len <= max_len; ++len) {
      if (mc != -kInf) {
        double c = 0.0;
        for (std::size_t s = 0; s < n; ++s) c += x[s] * cw[s];
        if (c > 0.0) {
          const double lc = std::log(c) + scale + mc;
          z.add(lc);
          if (keep_lengths) ev.per_length[len] = lc;
        }
      }
      ev.used = len;
      if (mq == -kInf) {
        vanished = true;
        break;
      }
      multiply(qw, x, y, true);
      const double top = *std::max_element(y.begin(), y.end());
      if (top == 0.0) {
        vanished = true;
        break;
      }
      for (std::size_t s = 0; s < n; ++s) x[s] = y[s] / top;
      scale += mq + std::log(top);
      if (relative_tail > 0.0 && len % 8 == 0) {
        const double tb = tail_bound();
        if (tb - z.value() < std::log(relative_tail)) {
          ev.log_sum = z.value();
          ev.log_tail = tb;
          ev.log_tail_lower = tail_lower();
          return ev;
        }
      }
    }
    ev.log_sum = z.value();
    ev.log_tail = vanished ? -kInf : tail_bound();
    ev.log_tail_lower = vanished ? -kInf : tail_lower();
    if (vanished) ev.used = max_len;
    return ev;
  }

  std::vector<double> edge_log_weights(const Potential& phi, const Potential& psi, double beta) const {
    const auto pe = graph_.edge_values(phi);
    const auto qe = graph_.edge_values(psi);
    std::vector<double> lw(pe.size());
    for (std::size_t e = 0; e < lw.size(); ++e) lw[e] = pe[e] - beta * qe[e];
    return lw;
  }

 private:
  static constexpr std::size_t kDenseCertificate = 2000;

  struct Resolvent {
    std::vector<double> upper;  ///< (I - Q) u >= c, so sum_j Q^j c <= u
    std::vector<double> lower;  ///< (I - Q) w <= c, so sum_j Q^j c >= w
  };

  // Solves (I - e^mq Q) u = c +- eta and checks each side; a side stays
  // empty when its check fails (rho(Q) >= 1 or too little accuracy).
  Resolvent resolvent_bounds(const std::vector<double>& qw, double mq, const std::vector<double>& cw) const {
    const std::size_t n = t_.size();
    const double f = std::exp(mq);
    if (!std::isfinite(f)) return {};
    std::vector<std::size_t> local(n, kNone);
    std::vector<std::size_t> states;
    for (std::size_t s = 0; s < n; ++s) {
      if (s != a_) {
        local[s] = states.size();
        states.push_back(s);
      }
    }
    const auto m = static_cast<Eigen::Index>(states.size());
    if (m == 0) return {};
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const std::size_t s = states[static_cast<std::size_t>(i)];
      for (std::size_t e = graph_.edge_begin(s); e < graph_.edge_end(s); ++e) {
        const std::size_t v = graph_.target(e);
        if (v != a_) a(i, static_cast<Eigen::Index>(local[v])) -= f * qw[e];
      }
    }
    const auto lu = a.partialPivLu();
    const double top = *std::max_element(cw.begin(), cw.end());

    // sign +1: u > 0 with u - Qu >= c + eta/2; sign -1: w - Qw <= c - eta/2.
    auto attempt = [&](double eta, double sign) {
      Eigen::VectorXd rhs(m);
      for (Eigen::Index i = 0; i < m; ++i) rhs(i) = cw[states[static_cast<std::size_t>(i)]] + sign * eta;
      const Eigen::VectorXd sol = lu.solve(rhs);
      std::vector<double> u(n, 0.0);
      for (Eigen::Index i = 0; i < m; ++i) {
        const double x = sol(i);
        if (!std::isfinite(x) || (sign > 0 && !(x > 0.0))) return std::vector<double>{};
        u[states[static_cast<std::size_t>(i)]] = x;
      }
      for (std::size_t s : states) {
        double qu = 0.0;
        for (std::size_t e = graph_.edge_begin(s); e < graph_.edge_end(s); ++e) {
          if (graph_.target(e) != a_) qu += f * qw[e] * u[graph_.target(e)];
        }
        const double slack = u[s] - qu - cw[s];
        if (sign > 0 ? slack < 0.5 * eta : slack > -0.5 * eta) return std::vector<double>{};
      }
      return u;
    };

    // Near-critical Q loses digits in the check; retry with more slack.
    Resolvent out;
    for (double rel : {1e-12, 1e-10, 1e-8}) {
      if (out.upper.empty()) out.upper = attempt(rel * top, 1.0);
      if (out.upper.empty()) continue;
      if (out.lower.empty()) out.lower = attempt(rel * top, -1.0);
      if (!out.lower.empty()) break;
    }
    if (out.upper.empty()) out.lower.clear();
    return out;
  }

  // y = Q v (rows) or y = x Q (transposed) over non-anchor states.
  void multiply(const std::vector<double>& qw, const std::vector<double>& in, std::vector<double>& out,
                bool transposed = false) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t s = 0; s < t_.size(); ++s) {
      if (s == a_) continue;
      for (std::size_t e = graph_.edge_begin(s); e < graph_.edge_end(s); ++e) {
        const std::size_t u = graph_.target(e);
        if (u == a_) continue;
        if (transposed) out[u] += in[s] * qw[e];
        else out[s] += qw[e] * in[u];
      }
    }
  }

  const Truncation& t_;
  std::size_t a_;
  TransferGraph graph_;
};

}  // namespace

LoopInventory series_inventory(const Truncation& trunc, Symbol anchor, std::size_t max_len) {
  if (max_len == 0) throw DomainError("loop length cap must be at least 1");
  const auto ia = trunc.index_of(anchor);
  if (!ia) throw DomainError("anchor " + std::to_string(anchor) + " is not retained by the truncation");

  LoopInventory inv;
  inv.kind_ = LoopInventory::Kind::Series;
  inv.collection_ = WordCollection::periodic_at(anchor);
  inv.max_length_ = max_len;
  inv.trunc_ = trunc;
  inv.source_ = trunc.induced().name();

  const SeriesModel model(trunc, *ia);
  const std::vector<double> zero(model.graph().edge_count(), 0.0);
  const auto ev = model.evaluate(zero, max_len, 0.0, true);
  inv.log_counts_ = ev.per_length;
  inv.exhausted_ = ev.log_tail == -kInf;
  const ShiftSpec& owner = trunc.owner();
  const bool whole = owner.is_finite() && trunc.size() == owner.symbols().size();
  inv.complete_.assign(max_len + 1, whole);
  return inv;
}

// ---------------------------------------------------------------------------

namespace {

Symbol pinned_continuation(const LoopInventory& inv, const Potential& p) {
  const auto& c = inv.collection();
  if (c.kind() == WordCollection::Kind::PeriodicAt) return c.anchor();
  if (c.start_set().size() == 1) return c.start_set().front();
  if (p.depth() > 1) {
    throw ModeError("depth-" + std::to_string(p.depth()) +
                    " potentials on bridges with several start symbols have no pinned continuation");
  }
  return 0;
}

}  // namespace

InducedPotential induce_potential(const Potential& p, const LoopInventory& inv) {
  InducedPotential out;
  out.name = p.name() + "~";
  switch (inv.kind()) {
    case LoopInventory::Kind::Series:
      throw PreconditionError("series inventories do not list individual loops");
    case LoopInventory::Kind::Aggregated: {
      if (!p.constant_value()) {
        throw PreconditionError("aggregated loop counts only carry constant potentials; " + p.name() +
                                " is not constant");
      }
      out.per_length = true;
      out.values.resize(inv.max_length() + 1);
      for (std::size_t l = 0; l <= inv.max_length(); ++l) out.values[l] = static_cast<double>(l) * *p.constant_value();
      return out;
    }
    case LoopInventory::Kind::Explicit:
      break;
  }
  if (p.depth() > 2) {
    throw ModeError("loop route supports potentials of depth <= 2; " + p.name() + " has depth " +
                    std::to_string(p.depth()));
  }
  const Symbol cont = pinned_continuation(inv, p);
  const Truncation& t = *inv.truncation();
  Symbol pair[2];
  auto edge = [&](Symbol u, Symbol v) {
    pair[0] = u;
    pair[1] = v;
    return p(std::span<const Symbol>(pair, 2));
  };

  // Sums along forced chains, filled on demand from the anchor backwards.
  const std::size_t n = t.size();
  std::vector<double> chain_sum(n, std::numeric_limits<double>::quiet_NaN());
  const auto anchor = t.index_of(cont);
  auto chain_value = [&](std::size_t s) {
    std::vector<std::size_t> walk;
    std::size_t cur = s;
    while (std::isnan(chain_sum[cur])) {
      walk.push_back(cur);
      const std::size_t nxt = t.successors(cur)[0];
      if (anchor && nxt == *anchor) break;
      cur = nxt;
    }
    double acc = std::isnan(chain_sum[cur]) ? 0.0 : chain_sum[cur];
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      const std::size_t u = *it;
      acc += edge(t.symbol(u), t.symbol(t.successors(u)[0]));
      chain_sum[u] = acc;
    }
    return chain_sum[s];
  };

  out.values.reserve(inv.loop_count());
  for (const auto& r : inv.loops()) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < r.head.size(); ++i) s += edge(r.head[i], r.head[i + 1]);
    if (r.chain == 0) {
      s += edge(r.head.back(), cont);
    } else {
      s += chain_value(*t.index_of(r.head.back()));
    }
    out.values.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

TailMajorant::TailMajorant(std::string description, Bounds bounds)
    : description_(std::move(description)), bounds_(std::move(bounds)) {}

TailMajorant TailMajorant::parametric(std::size_t cap, double a0, double a1, double a2, double b_lo,
                                      double b_hi) {
  if (!(b_lo > 0.0) || b_hi < b_lo) throw DomainError("tail majorant needs 0 < b_lo <= b_hi");
  std::ostringstream d;
  d << "parametric(cap=" << cap << ", a0=" << a0 << ", a1=" << a1 << ", a2=" << a2 << ", b=[" << b_lo
    << ", " << b_hi << "])";
  const double L = static_cast<double>(std::max<std::size_t>(cap, 1));
  return TailMajorant(d.str(), [=](double beta) {
    TailBounds tb;
    tb.log_lower = -kInf;
    const double b = beta >= 0.0 ? b_lo : b_hi;
    const double c1 = a1 - beta * b;
    if (c1 > 0.0) return tb;  // upper stays +inf
    if (c1 == 0.0) {
      if (a2 < -1.0) tb.log_upper = a0 + (a2 + 1.0) * std::log(L) - std::log(-a2 - 1.0);
      return tb;
    }
    const double q = std::exp(c1) * std::pow((L + 2.0) / (L + 1.0), std::max(a2, 0.0));
    if (q >= 1.0) return tb;
    tb.log_upper = a0 + c1 * (L + 1.0) + a2 * std::log(L + 1.0) - std::log1p(-q);
    return tb;
  });
}

TailMajorant TailMajorant::harmonic(std::size_t cap) {
  const double L = static_cast<double>(std::max<std::size_t>(cap, 1));
  return TailMajorant("harmonic(cap=" + std::to_string(cap) + ")", [L](double beta) {
    TailBounds tb;
    if (!(beta > 0.5)) {
      tb.log_lower = kInf;
      tb.log_upper = kInf;
      return tb;
    }
    const double k = 2.0 * beta - 1.0;
    tb.log_lower = -k * std::log(L + 2.0) - std::log(k);
    tb.log_upper = -k * std::log(L) - std::log(k);
    return tb;
  });
}

// ---------------------------------------------------------------------------

PressureResult loop_pressure(const LoopInventory& inv, const Potential& phi, const Potential& psi,
                             const LoopPressureOptions& options) {
  PressureResult out;
  out.method = Method::LoopRoute;
  out.diagnostics.max_word_length = inv.max_length();
  out.diagnostics.loops = inv.loop_count();
  if (inv.truncation()) out.diagnostics.truncation_size = inv.truncation()->size();

  // log Z_L(beta) and certified log tail bounds.
  std::function<std::pair<double, TailBounds>(double)> eval;
  std::optional<SeriesModel> series;
  std::vector<double> pe, qe;
  bool has_upper = options.tail.has_value() || inv.exhausted();

  switch (inv.kind()) {
    case LoopInventory::Kind::Explicit: {
      pe = induce_potential(phi, inv).values;
      qe = induce_potential(psi, inv).values;
      for (std::size_t i = 0; i < qe.size(); ++i) {
        if (!(qe[i] > 0.0)) {
          throw PreconditionError("induced psi is not positive on loop " + std::to_string(i));
        }
      }
      eval = [&](double beta) {
        LogSumExp z;
        for (std::size_t i = 0; i < pe.size(); ++i) z.add(pe[i] - beta * qe[i]);
        return std::make_pair(z.value(), TailBounds{-kInf, -kInf});
      };
      break;
    }
    case LoopInventory::Kind::Aggregated: {
      pe = induce_potential(phi, inv).values;
      qe = induce_potential(psi, inv).values;
      if (!(*psi.constant_value() > 0.0)) throw PreconditionError("psi must be positive");
      eval = [&](double beta) {
        LogSumExp z;
        const auto& lc = inv.log_counts();
        for (std::size_t l = 1; l < lc.size(); ++l) {
          if (lc[l] != -kInf) z.add(lc[l] + pe[l] - beta * qe[l]);
        }
        return std::make_pair(z.value(), TailBounds{-kInf, -kInf});
      };
      break;
    }
    case LoopInventory::Kind::Series: {
      if (phi.depth() > 2 || psi.depth() > 2) {
        throw ModeError("loop route supports potentials of depth <= 2");
      }
      const Truncation& t = *inv.truncation();
      series.emplace(t, *t.index_of(inv.collection().anchor()));
      pe = series->graph().edge_values(phi);
      qe = series->graph().edge_values(psi);
      for (double v : qe) {
        if (!(v > 0.0)) throw PreconditionError("psi (" + psi.name() + ") is not strictly positive on the truncation");
      }
      has_upper = true;
      eval = [&](double beta) {
        std::vector<double> lw(pe.size());
        for (std::size_t e = 0; e < lw.size(); ++e) lw[e] = pe[e] - beta * qe[e];
        const auto ev = series->evaluate(lw, inv.max_length(), options.series_relative_tail, false);
        out.diagnostics.loops = std::max(out.diagnostics.loops, ev.used);
        return std::make_pair(ev.log_sum, TailBounds{ev.log_tail_lower, ev.log_tail});
      };
      break;
    }
  }

  auto with_tail = [&](double beta, bool upper) {
    auto [z, tb] = eval(beta);
    if (options.tail) {
      const auto extra = (*options.tail)(beta);
      tb.log_lower = log_add(tb.log_lower, extra.log_lower);
      tb.log_upper = inv.kind() == LoopInventory::Kind::Series ? log_add(tb.log_upper, extra.log_upper)
                                                               : extra.log_upper;
    }
    return log_add(z, upper ? tb.log_upper : tb.log_lower);
  };

  ThresholdOptions topt;
  topt.tolerance = options.tolerance;
  int evaluations = 0;
  const auto lo = find_threshold([&](double b) { return with_tail(b, false); }, topt);
  evaluations += lo.evaluations;

  if (lo.status == ThresholdSearch::Status::NeverPositive) {
    out.value = out.lower = out.upper = -kInf;
    out.diagnostics.note = "empty loop inventory";
    out.diagnostics.evaluations = static_cast<std::size_t>(evaluations);
    return out;
  }
  if (lo.status == ThresholdSearch::Status::AlwaysPositive) {
    DivergenceCertificate cert;
    cert.reason = "loop series Z(beta) >= 1 at every probed beta up to " + format_extended(lo.lower);
    out.certificate = cert;
    out.value = out.upper = kInf;
    out.lower = lo.lower;
    out.diagnostics.evaluations = static_cast<std::size_t>(evaluations);
    return out;
  }

  out.lower = lo.value;
  out.value = lo.value;
  out.upper = kInf;
  if (has_upper) {
    if (inv.exhausted() && !options.tail && inv.kind() != LoopInventory::Kind::Series) {
      out.upper = lo.value;
    } else {
      ThresholdOptions hopt = topt;
      hopt.center = lo.value;
      hopt.radius = 1e-3;
      const auto hi = find_threshold([&](double b) { return with_tail(b, true); }, hopt);
      evaluations += hi.evaluations;
      if (hi.status == ThresholdSearch::Status::Found) {
        out.upper = std::max(hi.value, lo.value);
        out.value = 0.5 * (out.lower + out.upper);
      }
    }
  }
  out.diagnostics.evaluations = static_cast<std::size_t>(evaluations);
  out.diagnostics.residual = eval(out.value).first;
  if (options.tail) out.diagnostics.note = "tail: " + options.tail->description();
  return out;
}

}  // namespace ipress
