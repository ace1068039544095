#include "ipress/shift.hpp"

#include <algorithm>
#include <sstream>

#include "ipress/error.hpp"

namespace ipress {

std::string to_string(Family family) {
  switch (family) {
    case Family::Full: return "full";
    case Family::Renewal: return "renewal";
    case Family::GroupExtension: return "group-extension";
    case Family::Custom: return "custom";
  }
  return "custom";
}

// ---------------------------------------------------------------------------
// ShiftSpec

ShiftSpec ShiftSpec::full(std::size_t n) {
  std::vector<Symbol> symbols(n);
  for (std::size_t i = 0; i < n; ++i) symbols[i] = i + 1;
  auto spec = finite(std::move(symbols), [](Symbol, Symbol) { return true; }, Family::Full,
                     "full(" + std::to_string(n) + ")");
  return spec.with_successor_hint([n](Symbol, Symbol max_symbol, std::vector<Symbol>& out) {
    const Symbol top = std::min<Symbol>(n, max_symbol);
    for (Symbol t = 1; t <= top; ++t) out.push_back(t);
  });
}

ShiftSpec ShiftSpec::renewal() {
  auto spec = countable([](Symbol s) { return s >= 1; },
                        [](Symbol from, Symbol to) { return from == 1 || to + 1 == from; },
                        Family::Renewal, "renewal");
  spec = spec.with_successor_hint([](Symbol s, Symbol max_symbol, std::vector<Symbol>& out) {
    if (s == 1) {
      for (Symbol t = 1; t <= max_symbol; ++t) out.push_back(t);
    } else if (s - 1 <= max_symbol) {
      out.push_back(s - 1);
    }
  });
  // A simple loop at a of length l never climbs above max(a, l).
  return spec.with_loop_symbol_bound([](Symbol anchor, std::size_t length) -> std::optional<Symbol> {
    return std::max<Symbol>(anchor, length);
  });
}

ShiftSpec ShiftSpec::from_matrix(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.size();
  for (const auto& row : rows) {
    if (row.size() != n) throw DomainError("incidence matrix must be square");
    for (int v : row) {
      if (v != 0 && v != 1) throw DomainError("incidence matrix entries must be 0 or 1");
    }
  }
  std::vector<Symbol> symbols(n);
  for (std::size_t i = 0; i < n; ++i) symbols[i] = i + 1;
  auto table = std::make_shared<const std::vector<std::vector<int>>>(rows);
  return finite(
      std::move(symbols),
      [table](Symbol from, Symbol to) { return (*table)[from - 1][to - 1] != 0; },
      Family::Custom, "matrix(" + std::to_string(n) + ")");
}

ShiftSpec ShiftSpec::finite(std::vector<Symbol> symbols, Incidence incidence, Family family,
                            std::string name) {
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  if (!symbols.empty() && symbols.front() == 0) throw DomainError("symbols must be positive");
  auto impl = std::make_shared<Impl>();
  impl->finite = true;
  impl->symbols = std::move(symbols);
  impl->incidence = std::move(incidence);
  impl->family = family;
  impl->name = std::move(name);
  return ShiftSpec(std::move(impl));
}

ShiftSpec ShiftSpec::countable(Membership membership, Incidence incidence, Family family,
                               std::string name) {
  auto impl = std::make_shared<Impl>();
  impl->finite = false;
  impl->membership = std::move(membership);
  impl->incidence = std::move(incidence);
  impl->family = family;
  impl->name = std::move(name);
  return ShiftSpec(std::move(impl));
}

ShiftSpec ShiftSpec::with_successor_hint(SuccessorHint hint) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->successors = std::move(hint);
  return ShiftSpec(std::move(impl));
}

ShiftSpec ShiftSpec::with_loop_symbol_bound(LoopSymbolBound bound) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->loop_bound = std::move(bound);
  return ShiftSpec(std::move(impl));
}

bool ShiftSpec::is_finite() const noexcept { return impl_->finite; }
const std::vector<Symbol>& ShiftSpec::symbols() const noexcept { return impl_->symbols; }
Family ShiftSpec::family() const noexcept { return impl_->family; }
const std::string& ShiftSpec::name() const noexcept { return impl_->name; }
const ShiftSpec::SuccessorHint& ShiftSpec::successor_hint() const noexcept {
  return impl_->successors;
}
const ShiftSpec::LoopSymbolBound& ShiftSpec::loop_symbol_bound() const noexcept {
  return impl_->loop_bound;
}

bool ShiftSpec::contains(Symbol s) const {
  if (impl_->finite) {
    return std::binary_search(impl_->symbols.begin(), impl_->symbols.end(), s);
  }
  return s >= 1 && impl_->membership(s);
}

bool ShiftSpec::incidence(Symbol from, Symbol to) const {
  if (!contains(from)) throw DomainError("symbol " + std::to_string(from) + " outside alphabet of " + name());
  if (!contains(to)) throw DomainError("symbol " + std::to_string(to) + " outside alphabet of " + name());
  return impl_->incidence(from, to);
}

std::vector<Symbol> ShiftSpec::first_symbols(std::size_t n) const {
  if (impl_->finite) {
    const std::size_t m = std::min(n, impl_->symbols.size());
    return {impl_->symbols.begin(), impl_->symbols.begin() + static_cast<std::ptrdiff_t>(m)};
  }
  std::vector<Symbol> out;
  out.reserve(n);
  for (Symbol s = 1; out.size() < n; ++s) {
    if (impl_->membership(s)) out.push_back(s);
  }
  return out;
}

bool is_admissible(const ShiftSpec& spec, std::span<const Symbol> symbols) {
  if (symbols.empty()) throw DomainError("admissibility of the empty sequence is undefined");
  for (Symbol s : symbols) {
    if (!spec.contains(s)) throw DomainError("symbol " + std::to_string(s) + " outside alphabet of " + spec.name());
  }
  for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
    if (!spec.incidence_unchecked(symbols[i], symbols[i + 1])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// WordCollection

WordCollection WordCollection::all() { return {}; }

WordCollection WordCollection::periodic() {
  WordCollection c;
  c.kind_ = Kind::Periodic;
  return c;
}

WordCollection WordCollection::periodic_at(Symbol a) {
  WordCollection c;
  c.kind_ = Kind::PeriodicAt;
  c.anchor_ = a;
  c.start_ = {a};
  return c;
}

WordCollection WordCollection::starting_in(std::vector<Symbol> start) {
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  WordCollection c;
  c.kind_ = Kind::StartingIn;
  c.start_ = std::move(start);
  return c;
}

WordCollection WordCollection::bridges(std::vector<Symbol> start, std::vector<Symbol> terminal) {
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  std::sort(terminal.begin(), terminal.end());
  terminal.erase(std::unique(terminal.begin(), terminal.end()), terminal.end());
  WordCollection c;
  c.kind_ = Kind::Bridges;
  c.start_ = std::move(start);
  c.terminal_ = std::move(terminal);
  return c;
}

WordCollection WordCollection::custom(std::string name, Predicate predicate) {
  WordCollection c;
  c.kind_ = Kind::Custom;
  c.name_ = std::move(name);
  c.predicate_ = std::move(predicate);
  return c;
}

bool WordCollection::allows_first(Symbol s) const {
  switch (kind_) {
    case Kind::PeriodicAt: return s == anchor_;
    case Kind::StartingIn:
    case Kind::Bridges: return std::binary_search(start_.begin(), start_.end(), s);
    default: return true;
  }
}

bool WordCollection::contains(const ShiftSpec& spec, std::span<const Symbol> word) const {
  if (word.empty()) return false;
  switch (kind_) {
    case Kind::AllWords: return true;
    case Kind::Periodic: return spec.incidence_unchecked(word.back(), word.front());
    case Kind::PeriodicAt:
      return word.front() == anchor_ && spec.incidence_unchecked(word.back(), anchor_);
    case Kind::StartingIn: return allows_first(word.front());
    case Kind::Bridges:
      return allows_first(word.front()) &&
             std::binary_search(terminal_.begin(), terminal_.end(), word.back());
    case Kind::Custom: return predicate_(word);
  }
  return false;
}

namespace {
std::string join(const std::vector<Symbol>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}
}  // namespace

std::string WordCollection::describe() const {
  switch (kind_) {
    case Kind::AllWords: return "all";
    case Kind::Periodic: return "periodic";
    case Kind::PeriodicAt: return "periodic-at:" + std::to_string(anchor_);
    case Kind::StartingIn: return "starting:" + join(start_);
    case Kind::Bridges: return "bridges:" + join(start_) + ";" + join(terminal_);
    case Kind::Custom: return "custom:" + name_;
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Truncation

std::optional<std::size_t> Truncation::index_of(Symbol s) const {
  const auto& r = data_->retained;
  if (r.empty()) return std::nullopt;
  if (data_->contiguous) {
    if (s < r.front() || s > r.back()) return std::nullopt;
    return static_cast<std::size_t>(s - r.front());
  }
  auto it = std::lower_bound(r.begin(), r.end(), s);
  if (it == r.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - r.begin());
}

std::span<const std::size_t> Truncation::successors(std::size_t i) const {
  const auto b = data_->offsets[i];
  const auto e = data_->offsets[i + 1];
  return {data_->targets.data() + b, e - b};
}

bool Truncation::edge(std::size_t from, std::size_t to) const {
  auto succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

Truncation truncate(const ShiftSpec& spec, std::vector<Symbol> retained) {
  std::sort(retained.begin(), retained.end());
  retained.erase(std::unique(retained.begin(), retained.end()), retained.end());
  for (Symbol s : retained) {
    if (!spec.contains(s)) throw DomainError("cannot retain symbol " + std::to_string(s) + ": outside alphabet of " + spec.name());
  }

  auto data = std::make_shared<Truncation::Data>(Truncation::Data{
      spec, spec, retained, false, {}, {}});
  data->contiguous = !retained.empty() && retained.back() - retained.front() + 1 == retained.size();

  const auto keep = std::make_shared<const std::vector<Symbol>>(retained);
  const ShiftSpec owner = spec;
  data->induced = ShiftSpec::finite(
      retained, [owner](Symbol a, Symbol b) { return owner.incidence_unchecked(a, b); },
      spec.family(), spec.name() + "|" + std::to_string(retained.size()));

  Truncation probe(data);  // index_of is usable before successor lists exist
  const std::size_t n = retained.size();
  data->offsets.assign(n + 1, 0);
  std::vector<Symbol> hinted;
  for (std::size_t i = 0; i < n; ++i) {
    data->offsets[i] = data->targets.size();
    if (spec.successor_hint() && n > 0) {
      hinted.clear();
      spec.successor_hint()(retained[i], retained.back(), hinted);
      for (Symbol t : hinted) {
        if (auto j = probe.index_of(t)) data->targets.push_back(*j);
      }
      auto b = data->targets.begin() + static_cast<std::ptrdiff_t>(data->offsets[i]);
      std::sort(b, data->targets.end());
      data->targets.erase(std::unique(b, data->targets.end()), data->targets.end());
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        if (spec.incidence_unchecked(retained[i], retained[j])) data->targets.push_back(j);
      }
    }
  }
  data->offsets[n] = data->targets.size();
  return Truncation(std::move(data));
}

Truncation truncate_prefix(const ShiftSpec& spec, std::size_t n) {
  return truncate(spec, spec.first_symbols(n));
}

Truncation truncate_all(const ShiftSpec& spec) {
  if (!spec.is_finite()) throw DomainError("cannot take the identity truncation of a countable alphabet");
  return truncate(spec, spec.symbols());
}

std::vector<std::vector<int>> incidence_matrix(const Truncation& trunc) {
  const std::size_t n = trunc.size();
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : trunc.successors(i)) m[i][j] = 1;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Enumeration

void enumerate_words(const Truncation& trunc, const WordCollection& collection,
                     std::size_t max_len, const WordVisitor& visit) {
  if (max_len == 0) throw DomainError("max_len must be at least 1");
  if (trunc.empty()) return;
  const ShiftSpec& spec = trunc.owner();

  // Level-by-level extension keeps (length, lexicographic) order because
  // successor lists are sorted.
  std::vector<std::size_t> level;  // flattened words of the current length, local indices
  std::vector<std::size_t> next;
  std::vector<Symbol> word;
  std::size_t len = 1;
  for (std::size_t i = 0; i < trunc.size(); ++i) {
    if (collection.allows_first(trunc.symbol(i))) level.push_back(i);
  }
  while (!level.empty()) {
    const std::size_t count = level.size() / len;
    word.resize(len);
    for (std::size_t w = 0; w < count; ++w) {
      for (std::size_t k = 0; k < len; ++k) word[k] = trunc.symbol(level[w * len + k]);
      if (collection.contains(spec, word)) visit(word);
    }
    if (len == max_len) break;
    next.clear();
    for (std::size_t w = 0; w < count; ++w) {
      const std::size_t last = level[w * len + len - 1];
      for (std::size_t t : trunc.successors(last)) {
        next.insert(next.end(), level.begin() + static_cast<std::ptrdiff_t>(w * len),
                    level.begin() + static_cast<std::ptrdiff_t>((w + 1) * len));
        next.push_back(t);
      }
    }
    level.swap(next);
    ++len;
  }
}

std::vector<Word> collect_words(const Truncation& trunc, const WordCollection& collection,
                                std::size_t max_len) {
  std::vector<Word> out;
  enumerate_words(trunc, collection, max_len, [&](std::span<const Symbol> w) {
    out.push_back(Word{{w.begin(), w.end()}});
  });
  return out;
}

}  // namespace ipress
