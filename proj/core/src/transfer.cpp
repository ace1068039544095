#include "ipress/transfer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"

namespace ipress {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kFloor = 1e-300;
constexpr double kFloorLog = 690.0;
constexpr std::size_t kDenseStart = 64;

}  // namespace

TransferGraph::TransferGraph(const Truncation& trunc, std::size_t depth, std::size_t max_states)
    : trunc_(trunc), depth_(depth), memory_(depth > 1 ? depth - 1 : 1) {
  if (depth == 0) throw DomainError("transfer graph depth must be positive");
  const std::size_t n = trunc.size();

  if (memory_ == 1) {
    tuples_ = trunc.retained();
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      offsets_[i] = targets_.size();
      for (std::size_t j : trunc.successors(i)) targets_.push_back(j);
    }
    offsets_[n] = targets_.size();
    return;
  }

  // Admissible tuples in lexicographic order, grown one symbol at a time.
  std::vector<std::size_t> level;  // flattened local indices
  for (std::size_t i = 0; i < n; ++i) level.push_back(i);
  for (std::size_t len = 1; len < memory_; ++len) {
    std::vector<std::size_t> next;
    const std::size_t count = level.size() / len;
    for (std::size_t w = 0; w < count; ++w) {
      for (std::size_t t : trunc.successors(level[w * len + len - 1])) {
        next.insert(next.end(), level.begin() + static_cast<std::ptrdiff_t>(w * len),
                    level.begin() + static_cast<std::ptrdiff_t>((w + 1) * len));
        next.push_back(t);
        if (next.size() / (len + 1) > max_states) {
          throw ResourceError("transfer state space exceeds " + std::to_string(max_states) +
                              " tuples of length " + std::to_string(memory_));
        }
      }
    }
    level.swap(next);
  }
  const std::size_t count = level.size() / memory_;
  tuples_.resize(level.size());
  for (std::size_t k = 0; k < level.size(); ++k) tuples_[k] = trunc.symbol(level[k]);

  auto find = [&](const std::vector<Symbol>& key) -> std::size_t {
    std::size_t lo = 0, hi = count;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (std::lexicographical_compare(tuples_.begin() + static_cast<std::ptrdiff_t>(mid * memory_),
                                       tuples_.begin() + static_cast<std::ptrdiff_t>((mid + 1) * memory_),
                                       key.begin(), key.end())) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  };

  offsets_.assign(count + 1, 0);
  std::vector<Symbol> key(memory_);
  for (std::size_t u = 0; u < count; ++u) {
    offsets_[u] = targets_.size();
    for (std::size_t k = 1; k < memory_; ++k) key[k - 1] = tuples_[u * memory_ + k];
    for (std::size_t t : trunc.successors(level[u * memory_ + memory_ - 1])) {
      key[memory_ - 1] = trunc.symbol(t);
      targets_.push_back(find(key));
    }
  }
  offsets_[count] = targets_.size();
}

std::vector<double> TransferGraph::edge_values(const Potential& p) const {
  if (p.depth() > depth_) {
    throw DomainError("potential " + p.name() + " of depth " + std::to_string(p.depth()) +
                      " on a transfer graph built for depth " + std::to_string(depth_));
  }
  std::vector<double> out(targets_.size());
  std::vector<Symbol> tuple(memory_ + 1);
  for (std::size_t u = 0; u < size(); ++u) {
    auto s = state(u);
    std::copy(s.begin(), s.end(), tuple.begin());
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      tuple[memory_] = last_symbol(targets_[e]);
      out[e] = p(tuple);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Components strongly_connected_components(const TransferGraph& graph) {
  const std::size_t n = graph.size();
  Components out;
  out.component_of.assign(n, kNone);

  std::vector<std::size_t> index(n, kNone), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (state, next edge)
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.emplace_back(root, graph.edge_begin(root));
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [u, e] = call.back();
      if (e < graph.edge_end(u)) {
        const std::size_t v = graph.target(e++);
        if (index[v] == kNone) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
          call.emplace_back(v, graph.edge_begin(v));
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
        continue;
      }
      const std::size_t done = u;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        const std::size_t c = out.members.size();
        out.members.emplace_back();
        std::size_t v;
        do {
          v = stack.back();
          stack.pop_back();
          on_stack[v] = false;
          out.component_of[v] = c;
          out.members[c].push_back(v);
        } while (v != done);
        std::sort(out.members[c].begin(), out.members[c].end());
      }
    }
  }

  out.nontrivial.assign(out.members.size(), false);
  for (std::size_t c = 0; c < out.members.size(); ++c) {
    if (out.members[c].size() > 1) {
      out.nontrivial[c] = true;
      continue;
    }
    const std::size_t u = out.members[c][0];
    for (std::size_t e = graph.edge_begin(u); e < graph.edge_end(u); ++e) {
      if (graph.target(e) == u) out.nontrivial[c] = true;
    }
  }
  return out;
}

namespace {

std::vector<bool> reach_forward(const TransferGraph& g, const std::vector<bool>& seed) {
  std::vector<bool> seen = seed;
  std::vector<std::size_t> queue;
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (seed[u]) queue.push_back(u);
  }
  while (!queue.empty()) {
    const std::size_t u = queue.back();
    queue.pop_back();
    for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
      const std::size_t v = g.target(e);
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<bool> reach_backward(const TransferGraph& g, const std::vector<bool>& seed) {
  std::vector<std::vector<std::size_t>> pred(g.size());
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) pred[g.target(e)].push_back(u);
  }
  std::vector<bool> seen = seed;
  std::vector<std::size_t> queue;
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (seed[u]) queue.push_back(u);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t u : pred[v]) {
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

bool in_set(const std::vector<Symbol>& sorted, Symbol s) {
  return std::binary_search(sorted.begin(), sorted.end(), s);
}

}  // namespace

std::vector<std::size_t> relevant_components(const TransferGraph& graph, const Components& comps,
                                             const WordCollection& collection) {
  const std::size_t n = graph.size();
  std::vector<bool> keep(comps.members.size(), false);
  using Kind = WordCollection::Kind;

  switch (collection.kind()) {
    case Kind::AllWords:
    case Kind::Periodic:
      std::fill(keep.begin(), keep.end(), true);
      break;
    case Kind::PeriodicAt:
      for (std::size_t u = 0; u < n; ++u) {
        if (graph.first_symbol(u) == collection.anchor()) keep[comps.component_of[u]] = true;
      }
      break;
    case Kind::StartingIn:
    case Kind::Bridges: {
      std::vector<bool> start(n, false);
      for (std::size_t u = 0; u < n; ++u) start[u] = in_set(collection.start_set(), graph.first_symbol(u));
      auto fwd = reach_forward(graph, start);
      std::vector<bool> ok = fwd;
      if (collection.kind() == Kind::Bridges) {
        std::vector<bool> end(n, false);
        for (std::size_t u = 0; u < n; ++u) end[u] = in_set(collection.terminal_set(), graph.last_symbol(u));
        auto bwd = reach_backward(graph, end);
        for (std::size_t u = 0; u < n; ++u) ok[u] = fwd[u] && bwd[u];
      }
      for (std::size_t u = 0; u < n; ++u) {
        if (ok[u]) keep[comps.component_of[u]] = true;
      }
      break;
    }
    case Kind::Custom:
      throw PreconditionError("custom collections have no transfer-matrix characterization");
  }

  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < keep.size(); ++c) {
    if (keep[c] && comps.nontrivial[c]) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// One irreducible block in local CSR form with weights scaled by exp(-shift).
struct Block {
  std::vector<std::size_t> states;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> cols;
  std::vector<double> weights;
  std::vector<double> log_weights;  // unscaled; weights = exp(log_weights - shift)
  double shift = 0.0;
  double diagonal = 0.0;  // added multiple of the identity
};

Block make_block(const TransferGraph& g, std::span<const double> lw, const Components& comps,
                 std::size_t c) {
  Block b;
  b.states = comps.members[c];
  std::vector<std::size_t> local(g.size(), kNone);
  for (std::size_t i = 0; i < b.states.size(); ++i) local[b.states[i]] = i;
  b.shift = -kInf;
  for (std::size_t u : b.states) {
    for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
      if (comps.component_of[g.target(e)] == c) b.shift = std::max(b.shift, lw[e]);
    }
  }
  if (!std::isfinite(b.shift)) throw DomainError("transfer weights are not finite");
  b.offsets.push_back(0);
  double min_row = kInf;
  for (std::size_t u : b.states) {
    double row = 0.0;
    for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
      const std::size_t v = g.target(e);
      if (comps.component_of[v] != c) continue;
      const double w = std::exp(lw[e] - b.shift);
      b.cols.push_back(local[v]);
      b.weights.push_back(w);
      b.log_weights.push_back(lw[e]);
      row += w;
    }
    b.offsets.push_back(b.cols.size());
    min_row = std::min(min_row, row);
  }
  // Positive diagonal makes the block aperiodic without moving eigenvectors.
  b.diagonal = std::max(min_row, 1e-300);
  return b;
}

struct Iteration {
  std::vector<double> vec;
  double lo = 0.0;  // Collatz-Wielandt bounds on the radius of exp(-shift) B
  double hi = 0.0;
  double shift = 0.0;
  std::size_t iterations = 0;
};

// Starting vector for small blocks: a column of (B + dI)^(2^j) for large j.
// Nearly reducible blocks have a second eigenvalue very close to the first
// and plain power iteration from the ones vector crawls.
std::vector<double> squared_start(const Block& b, bool transpose) {
  const auto k = static_cast<Eigen::Index>(b.states.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k) * b.diagonal;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) {
      const auto j = static_cast<Eigen::Index>(b.cols[e]);
      if (transpose) m(j, i) += b.weights[e];
      else m(i, j) += b.weights[e];
    }
  }
  m /= m.maxCoeff();
  for (int j = 0; j < 80; ++j) {
    Eigen::MatrixXd next = m * m;
    next /= next.maxCoeff();
    const double change = (next - m).cwiseAbs().maxCoeff();
    m = std::move(next);
    if (change <= 1e-16) break;
  }
  const Eigen::VectorXd v = m.rowwise().sum();
  const double top = v.maxCoeff();
  std::vector<double> out(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = std::max(v(i) / top, kFloor);
  return out;
}

// Power iteration in log space. Used only to find a diagonal rescaling when
// the Perron vector spans more than the double exponent range.
std::vector<double> log_power(const Block& b, bool transpose, std::vector<double> lv, std::size_t steps) {
  const std::size_t k = b.states.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) {
      const double lw = b.log_weights[e];
      if (transpose) rows[b.cols[e]].emplace_back(i, lw);
      else rows[i].emplace_back(b.cols[e], lw);
    }
  }
  // Plain iteration v <- Bv moves badly scaled entries quickly; the result is
  // averaged with one more step so that a periodic block still gives a usable
  // scale.
  std::vector<double> next(k);
  auto step = [&](const std::vector<double>& in, std::vector<double>& out) {
    double top = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
      LogSumExp acc;
      for (const auto& [j, lw] : rows[i]) acc.add(lw + in[j]);
      out[i] = acc.value();
      top = std::max(top, out[i]);
    }
    for (double& x : out) x -= top;
  };
  for (std::size_t s = 0; s < steps; ++s) {
    step(lv, next);
    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::isfinite(next[i]) || std::isfinite(lv[i])) change = std::max(change, std::abs(next[i] - lv[i]));
    }
    lv.swap(next);
    if (change < 1e-9) break;
  }
  step(lv, next);
  double top = -kInf;
  for (std::size_t i = 0; i < k; ++i) {
    LogSumExp acc;
    acc.add(lv[i]);
    acc.add(next[i]);
    lv[i] = acc.value();
    top = std::max(top, lv[i]);
  }
  for (double& x : lv) x = std::isfinite(x) ? x - top : -kFloorLog;
  return lv;
}

// Max-plus eigenvector of the log weights by policy iteration: x with
// max_j (lw_ij + x_j) = mu + x_i, mu the largest cycle mean. Rescaling by x
// leaves every entry at most exp(mu), with equality somewhere in each row, so
// the radius is within a factor of the degree of the largest entry.
std::vector<double> max_plus_vector(const Block& b, bool transpose) {
  const std::size_t k = b.states.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) {
      const double lw = b.log_weights[e];
      if (!std::isfinite(lw)) continue;
      if (transpose) rows[b.cols[e]].emplace_back(i, lw);
      else rows[i].emplace_back(b.cols[e], lw);
    }
  }
  std::vector<std::size_t> policy(k, kNone);
  std::vector<double> pw(k, -kInf);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& [j, lw] : rows[i]) {
      if (lw > pw[i]) {
        pw[i] = lw;
        policy[i] = j;
      }
    }
    if (policy[i] == kNone) return std::vector<double>(k, 0.0);
  }

  std::vector<double> eta(k), x(k);
  std::vector<int> state(k);
  std::vector<std::size_t> path;
  for (int round = 0; round < 1000; ++round) {
    // Value determination on the functional graph of the policy.
    std::fill(state.begin(), state.end(), 0);
    for (std::size_t s0 = 0; s0 < k; ++s0) {
      if (state[s0] != 0) continue;
      path.clear();
      std::size_t u = s0;
      while (state[u] == 0) {
        state[u] = 1;
        path.push_back(u);
        u = policy[u];
      }
      std::size_t stop = path.size();
      if (state[u] == 1) {
        // New cycle starting at u.
        const auto at = std::find(path.begin(), path.end(), u);
        double sum = 0.0;
        for (auto p = at; p != path.end(); ++p) sum += pw[*p];
        const double mean = sum / static_cast<double>(path.end() - at);
        eta[u] = mean;
        x[u] = 0.0;
        state[u] = 2;
        stop = static_cast<std::size_t>(at - path.begin());
        for (std::size_t q = path.size(); q-- > stop + 1;) {
          const std::size_t v = path[q];
          eta[v] = mean;
          x[v] = pw[v] - mean + x[policy[v]];
          state[v] = 2;
        }
      }
      for (std::size_t q = stop; q-- > 0;) {
        const std::size_t v = path[q];
        eta[v] = eta[policy[v]];
        x[v] = pw[v] - eta[v] + x[policy[v]];
        state[v] = 2;
      }
    }
    // Improvement: first on the cycle mean, then on the bias.
    bool changed = false;
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& [j, lw] : rows[i]) {
        if (eta[j] > eta[i] + 1e-12 * (1.0 + std::abs(eta[i]))) {
          if (eta[j] > eta[policy[i]]) {
            policy[i] = j;
            pw[i] = lw;
            changed = true;
          }
        }
      }
    }
    if (!changed) {
      for (std::size_t i = 0; i < k; ++i) {
        for (const auto& [j, lw] : rows[i]) {
          if (eta[j] < eta[i]) continue;
          const double gain = lw - eta[i] + x[j];
          if (gain > x[i] + 1e-9 * (1.0 + std::abs(x[i]))) {
            policy[i] = j;
            pw[i] = lw;
            x[i] = gain;
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }
  return x;
}

// Replaces B by D^-1 B D (right vectors) or D B D^-1 (left vectors) with
// D = diag(exp h), so that the new Perron vector is close to all ones.
void rebalance(Block& b, bool transpose, const std::vector<double>& h) {
  double top = -kInf;
  for (std::size_t i = 0; i + 1 < b.offsets.size(); ++i) {
    for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) {
      b.log_weights[e] += transpose ? h[i] - h[b.cols[e]] : h[b.cols[e]] - h[i];
      top = std::max(top, b.log_weights[e]);
    }
  }
  const auto& lw = b.log_weights;
  b.shift = top;
  double min_row = kInf;
  for (std::size_t i = 0; i + 1 < b.offsets.size(); ++i) {
    double row = 0.0;
    for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) {
      b.weights[e] = std::exp(lw[e] - top);
      row += b.weights[e];
    }
    min_row = std::min(min_row, row);
  }
  b.diagonal = std::max(min_row, 1e-300);
}

// Power iteration on (B + dI) or its transpose until the Collatz-Wielandt
// bounds on the radius of B agree to the relative tolerance. Every 32 steps d
// moves up to the current lower bound: eigenvalues near -rho then shrink
// toward 0 and rounding noise in those modes dies out quickly. When entries
// of the iterate underflow, the block is rescaled by a log-space estimate of
// the Perron vector and the iteration restarts.
Iteration iterate(const Block& original, bool transpose, const PerronOptions& opt, const std::string& what) {
  constexpr int kMaxRebalance = 4;
  const std::size_t k = original.states.size();
  Block b = original;
  std::vector<double> h(k, 0.0);
  Iteration it;
  if (k <= kDenseStart) it.vec = squared_start(b, transpose);
  else it.vec.assign(k, 1.0);
  std::vector<double> y(k);
  std::size_t total = 0;

  auto finish = [&]() {
    it.shift = b.shift;
    it.iterations = total;
    double top = -kInf;
    for (std::size_t i = 0; i < k; ++i) top = std::max(top, h[i] + std::log(it.vec[i]));
    for (std::size_t i = 0; i < k; ++i) it.vec[i] = std::max(std::exp(h[i] + std::log(it.vec[i]) - top), kFloor);
    return it;
  };

  for (int attempt = 0;; ++attempt) {
    double diag = b.diagonal;
    bool underflow = false;
    for (std::size_t n = 1; n <= opt.max_iterations && total < opt.max_iterations; ++n) {
      ++total;
      for (std::size_t i = 0; i < k; ++i) y[i] = diag * it.vec[i];
      if (!transpose) {
        for (std::size_t i = 0; i < k; ++i) {
          double s = 0.0;
          for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) s += b.weights[e] * it.vec[b.cols[e]];
          y[i] += s;
        }
      } else {
        for (std::size_t i = 0; i < k; ++i) {
          const double xi = it.vec[i];
          for (std::size_t e = b.offsets[i]; e < b.offsets[i + 1]; ++e) y[b.cols[e]] += b.weights[e] * xi;
        }
      }
      double lo = kInf, hi = 0.0, top = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double r = y[i] / it.vec[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        top = std::max(top, y[i]);
      }
      it.lo = std::max(lo - diag, 0.0);
      it.hi = hi - diag;
      for (std::size_t i = 0; i < k; ++i) {
        const double v = y[i] / top;
        if (v < kFloor) underflow = true;
        it.vec[i] = std::max(v, kFloor);
      }
      if ((!underflow || attempt >= kMaxRebalance) && hi - lo <= opt.relative_tolerance * it.lo) return finish();
      if (underflow && attempt < kMaxRebalance && n >= 16) break;
      if (n % 32 == 0 && it.lo > diag) diag = it.lo;
    }
    if (!underflow || attempt >= kMaxRebalance || total >= opt.max_iterations) break;
    std::vector<double> g;
    if (attempt == 0) {
      g = max_plus_vector(b, transpose);
    } else {
      std::vector<double> lv(k);
      for (std::size_t i = 0; i < k; ++i) lv[i] = std::log(it.vec[i]);
      g = log_power(b, transpose, std::move(lv), 4000);
    }
    rebalance(b, transpose, g);
    for (std::size_t i = 0; i < k; ++i) h[i] += g[i];
    it.vec.assign(k, 1.0);
  }
  const double lower = b.shift + std::log(it.lo);
  const double upper = b.shift + std::log(it.hi);
  std::ostringstream os;
  os << what << ": power iteration did not converge in " << opt.max_iterations
     << " iterations; log radius in [" << format_extended(lower) << ", " << format_extended(upper) << "]";
  throw ConvergenceError(os.str(), lower, upper);
}

}  // namespace

SpectralRadius log_spectral_radius(const TransferGraph& graph, std::span<const double> log_weights,
                                   const Components& comps, std::span<const std::size_t> which,
                                   const PerronOptions& options) {
  SpectralRadius out;
  out.log_radius = out.log_lower = out.log_upper = -kInf;
  for (std::size_t c : which) {
    if (!comps.nontrivial[c]) continue;
    const Block b = make_block(graph, log_weights, comps, c);
    const Iteration it = iterate(b, false, options, "spectral radius");
    const double mid = 0.5 * (it.lo + it.hi);
    const double value = it.shift + std::log(mid);
    out.iterations += it.iterations;
    if (value > out.log_radius) {
      out.log_radius = value;
      out.log_lower = it.shift + std::log(it.lo);
      out.log_upper = it.shift + std::log(it.hi);
      out.component = c;
    }
  }
  return out;
}

PerronVectors perron_vectors(const TransferGraph& graph, std::span<const double> log_weights,
                             const Components& comps, std::size_t component,
                             const PerronOptions& options) {
  if (!comps.nontrivial[component]) throw DomainError("Perron vectors of a component without cycles");
  const Block b = make_block(graph, log_weights, comps, component);
  Iteration right = iterate(b, false, options, "right Perron vector");
  Iteration left = iterate(b, true, options, "left Perron vector");

  PerronVectors out;
  out.states = b.states;
  out.log_radius = right.shift + std::log(0.5 * (right.lo + right.hi));
  out.iterations = right.iterations + left.iterations;
  CompensatedSum total;
  for (double v : left.vec) total.add(v);
  out.left = std::move(left.vec);
  for (double& v : out.left) v /= total.value();
  out.right = std::move(right.vec);
  return out;
}

double finite_pressure(const Truncation& trunc, const Potential& p, const PerronOptions& options) {
  if (trunc.empty()) throw DomainError("pressure of an empty truncation");
  const TransferGraph graph(trunc, p.depth());
  const auto weights = graph.edge_values(p);
  const auto comps = strongly_connected_components(graph);
  const auto which = relevant_components(graph, comps, WordCollection::all());
  return log_spectral_radius(graph, weights, comps, which, options).log_radius;
}

}  // namespace ipress
