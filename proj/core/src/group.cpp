#include "ipress/group.hpp"

#include <Eigen/Dense>
#include <boost/functional/hash.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"

namespace ipress {

double log_big(const BigInt& n) {
  if (n < 0) throw DomainError("log of a negative integer");
  if (n == 0) return -kInf;
  const std::size_t bits = boost::multiprecision::msb(n);
  if (bits < 1000) return std::log(n.convert_to<double>());
  const std::size_t shift = bits - 60;
  const BigInt top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

// ---------------------------------------------------------------------------
// GroupModel

GroupModel GroupModel::z_power(std::size_t d) {
  if (d == 0) throw DomainError("Z^d needs d >= 1");
  GroupModel g;
  g.kind_ = Kind::ZPower;
  g.k_ = d;
  g.dim_ = d;
  return g;
}

GroupModel GroupModel::free_group(std::size_t k) {
  if (k == 0) throw DomainError("free group needs k >= 1");
  GroupModel g;
  g.kind_ = Kind::FreeGroup;
  g.k_ = k;
  return g;
}

GroupModel GroupModel::finite_table(std::vector<std::vector<std::size_t>> table,
                                    std::vector<std::string> names,
                                    std::vector<std::size_t> generators) {
  const std::size_t n = table.size();
  if (n == 0) throw DomainError("multiplication table is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw DomainError("multiplication table row " + std::to_string(i) + " has the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      if (table[i][j] >= n) throw DomainError("multiplication table entry out of range");
    }
    if (table[0][i] != i || table[i][0] != i) throw DomainError("element 0 must be the identity");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw DomainError("multiplication table is not associative");
        }
      }
    }
  }
  std::vector<std::size_t> inv(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] == 0 && table[b][a] == 0) inv[a] = b;
    }
    if (inv[a] == n) throw DomainError("element " + std::to_string(a) + " has no inverse");
  }
  if (names.empty()) {
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  }
  if (names.size() != n) throw DomainError("element name count does not match the table");
  if (generators.empty()) {
    for (std::size_t a = 1; a < n; ++a) {
      if (inv[a] >= a) generators.push_back(a);
    }
    if (generators.empty()) throw DomainError("the trivial group has no generators");
  }
  for (std::size_t s : generators) {
    if (s >= n) throw DomainError("generator out of range");
  }
  GroupModel g;
  g.kind_ = Kind::FiniteTable;
  g.k_ = generators.size();
  g.table_ = std::move(table);
  g.inverse_ = std::move(inv);
  g.names_ = std::move(names);
  g.generators_ = std::move(generators);
  return g;
}

GroupModel GroupModel::finite_table_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> names;
  while (names.empty() && std::getline(in, line)) {
    std::istringstream ls(line);
    std::string w;
    while (ls >> w) names.push_back(w);
  }
  if (names.empty()) throw DomainError("group table has no header line");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], i).second) throw DomainError("duplicate element name " + names[i]);
  }
  std::vector<std::vector<std::size_t>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::size_t> row;
    std::string w;
    while (ls >> w) {
      auto it = index.find(w);
      if (it == index.end()) throw DomainError("unknown element name " + w + " in group table");
      row.push_back(it->second);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.size() != names.size()) {
    throw DomainError("group table has " + std::to_string(rows.size()) + " rows for " +
                      std::to_string(names.size()) + " elements");
  }
  return finite_table(std::move(rows), std::move(names));
}

GroupModel GroupModel::quotient(std::size_t k, const GroupModel& target, std::vector<Element> images) {
  if (k == 0) throw DomainError("quotient needs k >= 1");
  if (target.kind() != Kind::ZPower && target.kind() != Kind::FiniteTable) {
    throw DomainError("quotient targets must be Z^d or a finite table");
  }
  if (images.size() != k) throw DomainError("quotient needs one image per generator");
  const std::size_t width = target.identity().size();
  for (const auto& e : images) {
    if (e.size() != width) throw DomainError("quotient image has the wrong shape");
    if (target.kind() == Kind::FiniteTable && (e[0] < 0 || static_cast<std::size_t>(e[0]) >= target.order())) {
      throw DomainError("quotient image out of range");
    }
  }
  GroupModel g;
  g.kind_ = Kind::Quotient;
  g.k_ = k;
  g.target_ = std::make_shared<const GroupModel>(target);
  g.images_ = std::move(images);
  return g;
}

GroupModel::Element GroupModel::identity() const {
  switch (kind_) {
    case Kind::ZPower: return Element(dim_, 0);
    case Kind::FreeGroup: return {};
    case Kind::FiniteTable: return {0};
    case Kind::Quotient: return target_->identity();
  }
  return {};
}

GroupModel::Element GroupModel::multiply(const Element& a, const Element& b) const {
  switch (kind_) {
    case Kind::ZPower: {
      Element c(a);
      for (std::size_t i = 0; i < dim_; ++i) c[i] += b[i];
      return c;
    }
    case Kind::FreeGroup: {
      Element c(a);
      for (std::int64_t x : b) {
        if (!c.empty() && c.back() == -x) c.pop_back();
        else c.push_back(x);
      }
      return c;
    }
    case Kind::FiniteTable:
      return {static_cast<std::int64_t>(table_[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])])};
    case Kind::Quotient:
      return target_->multiply(a, b);
  }
  return {};
}

GroupModel::Element GroupModel::inverse(const Element& a) const {
  switch (kind_) {
    case Kind::ZPower: {
      Element c(a);
      for (auto& x : c) x = -x;
      return c;
    }
    case Kind::FreeGroup: {
      Element c(a.rbegin(), a.rend());
      for (auto& x : c) x = -x;
      return c;
    }
    case Kind::FiniteTable:
      return {static_cast<std::int64_t>(inverse_[static_cast<std::size_t>(a[0])])};
    case Kind::Quotient:
      return target_->inverse(a);
  }
  return {};
}

GroupModel::Element GroupModel::letter(std::size_t i) const {
  if (i >= 2 * k_) throw DomainError("letter index out of range");
  const bool inv = i >= k_;
  const std::size_t g = inv ? i - k_ : i;
  switch (kind_) {
    case Kind::ZPower: {
      Element c(dim_, 0);
      c[g] = inv ? -1 : 1;
      return c;
    }
    case Kind::FreeGroup: {
      const auto x = static_cast<std::int64_t>(g + 1);
      return {inv ? -x : x};
    }
    case Kind::FiniteTable: {
      const std::size_t e = generators_[g];
      return {static_cast<std::int64_t>(inv ? inverse_[e] : e)};
    }
    case Kind::Quotient:
      return inv ? target_->inverse(images_[g]) : images_[g];
  }
  return {};
}

bool GroupModel::is_finite() const noexcept {
  if (kind_ == Kind::FiniteTable) return true;
  if (kind_ == Kind::Quotient) return target_->is_finite();
  return false;
}

std::size_t GroupModel::order() const {
  if (kind_ == Kind::FiniteTable) return table_.size();
  if (kind_ == Kind::Quotient && target_->is_finite()) return target_->order();
  throw DomainError(describe() + " is infinite");
}

std::string GroupModel::describe() const {
  switch (kind_) {
    case Kind::ZPower: return dim_ == 1 ? "Z" : "Z^" + std::to_string(dim_);
    case Kind::FreeGroup: return "F" + std::to_string(k_);
    case Kind::FiniteTable: {
      std::string s = "table(" + std::to_string(table_.size()) + "; gens";
      for (std::size_t g : generators_) s += " " + names_[g];
      return s + ")";
    }
    case Kind::Quotient: return "F" + std::to_string(k_) + " -> " + target_->describe();
  }
  return "?";
}

std::string to_string(ExtensionVariant v) { return v == ExtensionVariant::Plain ? "plain" : "nobacktrack"; }

ExtensionShift::ExtensionShift(GroupModel g, ExtensionVariant v) : group(std::move(g)), variant(v) {
  if (variant == ExtensionVariant::NoBacktrack) {
    if (group.generator_count() < 2) {
      throw PreconditionError("the no-backtrack extension needs k >= 2 generators");
    }
    if (group.trivial_kernel()) {
      throw PreconditionError("the no-backtrack extension needs a nontrivial kernel; " + group.describe() +
                              " is free");
    }
  }
}

std::string ExtensionShift::describe() const { return group.describe() + " " + to_string(variant); }

// ---------------------------------------------------------------------------
// Counting

namespace {

struct Key {
  GroupModel::Element element;
  int last;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = boost::hash_range(k.element.begin(), k.element.end());
    boost::hash_combine(h, k.last);
    return h;
  }
};

struct DpCounts {
  std::vector<BigInt> returns;
  std::vector<BigInt> totals;
};

// Frequency-map DP over (element, last letter); the last letter is tracked
// only when backtracking is forbidden.
DpCounts direct_dp(const ExtensionShift& ext, std::size_t n_max, bool first_return, std::size_t max_states) {
  const GroupModel& g = ext.group;
  const bool nb = ext.variant == ExtensionVariant::NoBacktrack;
  const std::size_t letters = g.letter_count();
  std::vector<GroupModel::Element> step(letters);
  for (std::size_t i = 0; i < letters; ++i) step[i] = g.letter(i);
  const auto id = g.identity();

  DpCounts out;
  out.returns.assign(n_max + 1, 0);
  out.totals.assign(n_max + 1, 0);
  out.returns[0] = 1;
  out.totals[0] = 1;
  std::unordered_map<Key, BigInt, KeyHash> cur, next;
  cur.emplace(Key{id, -1}, BigInt(1));
  for (std::size_t n = 1; n <= n_max; ++n) {
    next.clear();
    for (const auto& [key, c] : cur) {
      for (std::size_t t = 0; t < letters; ++t) {
        if (nb && key.last >= 0 && t == g.inverse_letter(static_cast<std::size_t>(key.last))) continue;
        Key k2{g.multiply(key.element, step[t]), nb ? static_cast<int>(t) : -1};
        next[std::move(k2)] += c;
      }
    }
    if (next.size() > max_states) {
      throw ResourceError("path-count DP for " + ext.describe() + " reached " + std::to_string(next.size()) +
                          " states (reachable ball at radius " + std::to_string(n) + ") beyond the budget of " +
                          std::to_string(max_states));
    }
    BigInt total = 0, ret = 0;
    for (auto it = next.begin(); it != next.end();) {
      total += it->second;
      if (it->first.element == id) {
        ret += it->second;
        if (first_return) {
          it = next.erase(it);
          continue;
        }
      }
      ++it;
    }
    out.returns[n] = ret;
    out.totals[n] = total;
    std::swap(cur, next);
  }
  return out;
}

// Free group, plain: the distance from the identity is a birth-death chain
// with 2k ways up from 0, 2k-1 ways up and 1 way down elsewhere.
std::vector<BigInt> free_group_returns(std::size_t k, std::size_t n_max, bool first_return) {
  std::vector<BigInt> out(n_max + 1, 0);
  out[0] = 1;
  std::vector<BigInt> v(n_max + 2, 0), w(n_max + 2, 0);
  v[0] = 1;
  const unsigned up0 = static_cast<unsigned>(2 * k);
  const unsigned up = static_cast<unsigned>(2 * k - 1);
  for (std::size_t n = 1; n <= n_max; ++n) {
    // Only distances that can still reach 0 by step n_max matter.
    const std::size_t dmax = std::min(n, n_max - n);
    for (std::size_t d = 0; d <= dmax; ++d) {
      BigInt x = d + 1 <= n_max ? v[d + 1] : BigInt(0);
      if (d == 1) x += v[0] * up0;
      else if (d > 1) x += v[d - 1] * up;
      w[d] = std::move(x);
    }
    for (std::size_t d = dmax + 1; d < w.size(); ++d) w[d] = 0;
    out[n] = w[0];
    if (first_return) w[0] = 0;
    std::swap(v, w);
  }
  return out;
}

bool fast_z(const ExtensionShift& ext) {
  return ext.variant == ExtensionVariant::Plain && ext.group.kind() == GroupModel::Kind::ZPower &&
         ext.group.generator_count() == 1;
}

bool fast_free(const ExtensionShift& ext) {
  return ext.variant == ExtensionVariant::Plain && ext.group.kind() == GroupModel::Kind::FreeGroup;
}

}  // namespace

std::vector<BigInt> return_counts(const ExtensionShift& ext, std::size_t n_max, const CountOptions& options) {
  if (options.use_fast_paths && fast_z(ext)) {
    std::vector<BigInt> out(n_max + 1, 0);
    out[0] = 1;
    BigInt c = 1;  // binom(2m, m)
    for (std::size_t m = 1; 2 * m <= n_max; ++m) {
      c = c * (2 * m) * (2 * m - 1) / (m * m);
      out[2 * m] = c;
    }
    return out;
  }
  if (options.use_fast_paths && fast_free(ext)) return free_group_returns(ext.group.generator_count(), n_max, false);
  return direct_dp(ext, n_max, false, options.max_states).returns;
}

std::vector<BigInt> count_first_returns(const ExtensionShift& ext, std::size_t n_max, const CountOptions& options) {
  std::vector<BigInt> out;
  if (options.use_fast_paths && fast_z(ext)) {
    out.assign(n_max + 1, 0);
    BigInt catalan = 1;  // C_{m-1}
    for (std::size_t m = 1; 2 * m <= n_max; ++m) {
      if (m > 1) {
        const std::size_t j = m - 2;  // C_{j+1} = C_j 2(2j+1)/(j+2)
        catalan = catalan * (2 * (2 * j + 1)) / (j + 2);
      }
      out[2 * m] = 2 * catalan;
    }
  } else if (options.use_fast_paths && fast_free(ext)) {
    out = free_group_returns(ext.group.generator_count(), n_max, true);
  } else {
    out = direct_dp(ext, n_max, true, options.max_states).returns;
  }
  if (!out.empty()) out[0] = 0;
  return out;
}

BigInt count_paths(const ExtensionShift& ext, std::size_t n, PathConstraint constraint, const CountOptions& options) {
  if (n == 0) throw DomainError("path length must be at least 1");
  if (constraint == PathConstraint::ReturnToId) return return_counts(ext, n, options)[n];
  if (options.use_fast_paths) {
    const BigInt letters = ext.group.letter_count();
    if (ext.variant == ExtensionVariant::Plain) return boost::multiprecision::pow(letters, static_cast<unsigned>(n));
    return letters * boost::multiprecision::pow(letters - 1, static_cast<unsigned>(n - 1));
  }
  return direct_dp(ext, n, false, options.max_states).totals[n];
}

// ---------------------------------------------------------------------------
// Gap

std::string to_string(GapReport::Verdict v) {
  switch (v) {
    case GapReport::Verdict::AmenableConsistent: return "Amenable-consistent";
    case GapReport::Verdict::NonamenableConsistent: return "Nonamenable-consistent";
    case GapReport::Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

GapReport pressure_gap(const ExtensionShift& ext, std::size_t n_max, const CountOptions& options) {
  if (n_max < 8) throw DomainError("pressure_gap needs n_max >= 8");
  GapReport rep;
  const double letters = static_cast<double>(ext.group.letter_count());
  rep.full_pressure = ext.variant == ExtensionVariant::Plain ? std::log(letters) : std::log(letters - 1.0);

  const auto counts = return_counts(ext, n_max, options);
  rep.estimate = -kInf;
  for (std::size_t n = (n_max / 2 + 1) / 2 * 2; n <= n_max; n += 2) {
    if (counts[n] == 0) continue;
    GapRow row;
    row.n = n;
    row.log_count = log_big(counts[n]);
    row.rate = row.log_count / static_cast<double>(n);
    rep.estimate = std::max(rep.estimate, row.rate);
    rep.table.push_back(row);
  }
  rep.gap = rep.full_pressure - rep.estimate;

  const std::size_t m = rep.table.size();
  if (m < 4) {
    rep.slope = rep.estimate;
    rep.slope_se = kInf;
    rep.gap_fit = rep.gap;
    rep.tolerance = kInf;
    rep.verdict = GapReport::Verdict::Inconclusive;
    return rep;
  }
  Eigen::MatrixXd x(m, 3);
  Eigen::VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double n = static_cast<double>(rep.table[i].n);
    x(i, 0) = 1.0;
    x(i, 1) = std::log(n) / n;
    x(i, 2) = 1.0 / n;
    y(i) = rep.table[i].rate;
  }
  const Eigen::Vector3d coef = x.colPivHouseholderQr().solve(y);
  const double rss = (x * coef - y).squaredNorm();
  const double sigma2 = rss / static_cast<double>(m - 3);
  const Eigen::Matrix3d cov = sigma2 * (x.transpose() * x).inverse();
  rep.slope = coef(0);
  rep.slope_se = std::sqrt(std::max(cov(0, 0), 0.0));
  rep.gap_fit = rep.full_pressure - rep.slope;
  rep.tolerance = 3.0 * rep.slope_se + 1e-3;
  if (std::abs(rep.gap_fit) <= rep.tolerance) {
    rep.verdict = GapReport::Verdict::AmenableConsistent;
  } else if (rep.gap_fit > rep.tolerance && rep.gap > rep.tolerance) {
    rep.verdict = GapReport::Verdict::NonamenableConsistent;
  } else {
    rep.verdict = GapReport::Verdict::Inconclusive;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extension as a Markov shift

namespace {

// Breadth-first numbering of group elements, grown on demand.
class ElementIndex {
 public:
  explicit ElementIndex(GroupModel g) : g_(std::move(g)) {
    const auto id = g_.identity();
    elements_.push_back(id);
    index_.emplace(id, 0);
    radius_end_.push_back(1);
  }

  std::optional<GroupModel::Element> at(std::size_t i) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (elements_.size() <= i && !complete_) grow();
    if (i < elements_.size()) return elements_[i];
    return std::nullopt;
  }

  std::size_t index(const GroupModel::Element& e) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (true) {
      auto it = index_.find(e);
      if (it != index_.end()) return it->second;
      if (complete_) throw DomainError("element is not in " + g_.describe());
      grow();
    }
  }

  std::size_t radius(std::size_t i) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (elements_.size() <= i && !complete_) grow();
    return static_cast<std::size_t>(std::upper_bound(radius_end_.begin(), radius_end_.end(), i) - radius_end_.begin());
  }

  /// Number of elements within distance r of the identity.
  std::size_t ball(std::size_t r) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (radius_end_.size() <= r && !complete_) grow();
    return radius_end_[std::min(r, radius_end_.size() - 1)];
  }

  std::size_t size_if_finite() {
    std::lock_guard<std::mutex> lock(mutex_);
    while (!complete_) grow();
    return elements_.size();
  }

 private:
  void grow() {
    const std::size_t begin = radius_end_.size() >= 2 ? radius_end_[radius_end_.size() - 2] : 0;
    const std::size_t end = radius_end_.back();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t t = 0; t < g_.letter_count(); ++t) {
        auto e = g_.multiply(elements_[i], g_.letter(t));
        if (index_.emplace(e, elements_.size()).second) elements_.push_back(std::move(e));
      }
    }
    if (elements_.size() == end) {
      complete_ = true;
      return;
    }
    if (elements_.size() > kMaxElements) {
      throw ResourceError("group element index for " + g_.describe() + " exceeded " + std::to_string(kMaxElements) +
                          " elements");
    }
    radius_end_.push_back(elements_.size());
  }

  static constexpr std::size_t kMaxElements = 20'000'000;
  GroupModel g_;
  std::mutex mutex_;
  std::vector<GroupModel::Element> elements_;
  std::unordered_map<GroupModel::Element, std::size_t, boost::hash<GroupModel::Element>> index_;
  std::vector<std::size_t> radius_end_;
  bool complete_ = false;
};

}  // namespace

ExtensionSpec extension_shift_spec(const ExtensionShift& ext) {
  const GroupModel g = ext.group;
  const std::size_t letters = g.letter_count();
  const bool nb = ext.variant == ExtensionVariant::NoBacktrack;
  auto index = std::make_shared<ElementIndex>(g);

  auto letter_of = [letters](Symbol s) { return static_cast<std::size_t>((s - 1) % letters); };
  auto element_index = [letters](Symbol s) { return static_cast<std::size_t>((s - 1) / letters); };
  auto encode = [letters](std::size_t letter, std::size_t elem) -> Symbol { return 1 + letter + letters * elem; };

  auto incidence = [=](Symbol from, Symbol to) {
    const std::size_t t1 = letter_of(from), t2 = letter_of(to);
    if (nb && t2 == g.inverse_letter(t1)) return false;
    const auto h = index->at(element_index(from));
    const auto h2 = index->at(element_index(to));
    if (!h || !h2) return false;
    return g.multiply(*h, g.letter(t1)) == *h2;
  };

  const std::string name = "group-extension(" + ext.describe() + ")";
  ShiftSpec spec = [&] {
    if (g.is_finite()) {
      const std::size_t order = index->size_if_finite();
      std::vector<Symbol> symbols(order * letters);
      for (std::size_t i = 0; i < symbols.size(); ++i) symbols[i] = i + 1;
      return ShiftSpec::finite(std::move(symbols), incidence, Family::GroupExtension, name);
    }
    return ShiftSpec::countable([](Symbol s) { return s >= 1; }, incidence, Family::GroupExtension, name);
  }();

  spec = spec.with_successor_hint([=](Symbol s, Symbol max_symbol, std::vector<Symbol>& out) {
    const std::size_t t1 = letter_of(s);
    const auto h = index->at(element_index(s));
    if (!h) return;
    const std::size_t j = index->index(g.multiply(*h, g.letter(t1)));
    for (std::size_t t2 = 0; t2 < letters; ++t2) {
      if (nb && t2 == g.inverse_letter(t1)) continue;
      const Symbol u = encode(t2, j);
      if (u <= max_symbol) out.push_back(u);
    }
  });
  // A loop of length l at (t, h) stays within distance l of h.
  spec = spec.with_loop_symbol_bound([=](Symbol anchor, std::size_t length) -> std::optional<Symbol> {
    const std::size_t r = index->radius(element_index(anchor));
    return static_cast<Symbol>(letters * index->ball(r + length));
  });

  ExtensionSpec out{spec, {}, {}, nullptr, nullptr};
  for (std::size_t t = 0; t < letters; ++t) {
    out.start.push_back(encode(t, 0));
    out.terminal.push_back(encode(t, index->index(g.inverse(g.letter(t)))));
  }
  std::sort(out.terminal.begin(), out.terminal.end());
  out.element_of = [=](Symbol s) {
    auto h = index->at(element_index(s));
    if (!h) throw DomainError("symbol " + std::to_string(s) + " is outside the extension");
    return *h;
  };
  out.letter_of = letter_of;
  return out;
}

LoopInventory bridge_inventory(const ExtensionShift& ext, std::size_t max_len, const CountOptions& options) {
  if (ext.variant != ExtensionVariant::Plain) {
    throw PreconditionError("bridge inventories need the plain extension; no-backtrack bridges do not concatenate");
  }
  if (max_len == 0) throw DomainError("loop length cap must be at least 1");
  const auto first = count_first_returns(ext, max_len, options);
  std::vector<double> logs(first.size());
  for (std::size_t n = 0; n < first.size(); ++n) logs[n] = log_big(first[n]);
  const auto es = extension_shift_spec(ext);
  return LoopInventory::aggregated(WordCollection::bridges(es.start, es.terminal), std::move(logs), false,
                                   es.spec.name());
}

IrreducibilityReport check_finite_irreducibility(const ExtensionShift& ext) {
  IrreducibilityReport rep;
  const GroupModel& g = ext.group;
  if (!g.is_finite()) {
    rep.detail = g.describe() + " is infinite; the reachable state space is not finite";
    return rep;
  }
  rep.finite_state_space = true;
  const auto es = extension_shift_spec(ext);
  const auto& symbols = es.spec.symbols();
  constexpr std::size_t kMaxStates = 4096;

  // States reachable from the start symbols.
  std::map<Symbol, std::vector<Symbol>> succ;
  for (Symbol s : symbols) {
    std::vector<Symbol> out;
    es.spec.successor_hint()(s, symbols.back(), out);
    succ.emplace(s, std::move(out));
  }
  std::set<Symbol> reach(es.start.begin(), es.start.end());
  std::deque<Symbol> queue(es.start.begin(), es.start.end());
  while (!queue.empty()) {
    const Symbol s = queue.front();
    queue.pop_front();
    for (Symbol t : succ[s]) {
      if (reach.insert(t).second) queue.push_back(t);
    }
  }
  rep.reachable_states = reach.size();
  if (reach.size() > kMaxStates) {
    throw ResourceError("irreducibility check limited to " + std::to_string(kMaxStates) + " states");
  }

  // Shortest connector from every reachable state to every other.
  std::set<std::vector<Symbol>> connectors;
  bool all = true;
  for (Symbol u : reach) {
    std::map<Symbol, Symbol> parent;
    std::deque<Symbol> q{u};
    parent[u] = 0;
    while (!q.empty()) {
      const Symbol s = q.front();
      q.pop_front();
      for (Symbol t : succ[s]) {
        if (parent.emplace(t, s).second) q.push_back(t);
      }
    }
    for (Symbol v : reach) {
      if (v == u) continue;
      if (!parent.count(v)) {
        all = false;
        continue;
      }
      std::vector<Symbol> word;
      for (Symbol s = parent[v]; s != u; s = parent[s]) word.push_back(s);
      std::reverse(word.begin(), word.end());
      rep.max_connector_length = std::max(rep.max_connector_length, word.size());
      connectors.insert(std::move(word));
    }
  }
  rep.connecting_words = connectors.size();
  rep.finitely_irreducible = all;
  std::ostringstream d;
  d << rep.reachable_states << " reachable states; " << rep.connecting_words << " connecting words of length <= "
    << rep.max_connector_length;
  if (!all) d << "; some pairs are not connected";
  rep.detail = d.str();
  return rep;
}

}  // namespace ipress
