#pragma once

// Countable-state one-sided Markov shifts, admissible words, collections of
// words and compact truncations.
//
// Symbols are positive integers. A ShiftSpec is either finite (an explicit
// sorted symbol list) or countable (a membership predicate over N). Countable
// alphabets are never materialized: every enumeration goes through a
// Truncation, which retains a finite symbol set and precomputes successor
// lists over it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ipress {

using Symbol = std::uint64_t;

enum class Family { Full, Renewal, GroupExtension, Custom };

std::string to_string(Family family);

class ShiftSpec {
 public:
  using Incidence = std::function<bool(Symbol, Symbol)>;
  using Membership = std::function<bool(Symbol)>;
  /// Appends, in increasing order, every successor t <= max_symbol of s.
  /// Optional; lets truncations avoid the quadratic oracle scan.
  using SuccessorHint = std::function<void(Symbol s, Symbol max_symbol, std::vector<Symbol>& out)>;
  /// Largest symbol that can occur in a simple loop at `anchor` with the given
  /// length, or nullopt when no bound is known.
  using LoopSymbolBound = std::function<std::optional<Symbol>(Symbol anchor, std::size_t length)>;

  /// Full shift on {1..n}.
  static ShiftSpec full(std::size_t n);
  /// Renewal shift on N rooted at 1: A(1,n) = A(n,n-1) = 1, all else 0.
  static ShiftSpec renewal();
  /// Explicit 0/1 matrix; symbols are 1..rows.size().
  static ShiftSpec from_matrix(const std::vector<std::vector<int>>& rows);
  static ShiftSpec finite(std::vector<Symbol> symbols, Incidence incidence, Family family,
                          std::string name);
  static ShiftSpec countable(Membership membership, Incidence incidence, Family family,
                             std::string name);

  ShiftSpec with_successor_hint(SuccessorHint hint) const;
  ShiftSpec with_loop_symbol_bound(LoopSymbolBound bound) const;

  bool is_finite() const noexcept;
  /// Sorted alphabet; empty for countable specs.
  const std::vector<Symbol>& symbols() const noexcept;
  bool contains(Symbol s) const;
  /// Incidence oracle. Throws DomainError for symbols outside the alphabet.
  bool incidence(Symbol from, Symbol to) const;
  /// Oracle without the alphabet check, for callers that already validated.
  bool incidence_unchecked(Symbol from, Symbol to) const { return impl_->incidence(from, to); }

  Family family() const noexcept;
  const std::string& name() const noexcept;
  const SuccessorHint& successor_hint() const noexcept;
  const LoopSymbolBound& loop_symbol_bound() const noexcept;

  /// The first n alphabet members in increasing order.
  std::vector<Symbol> first_symbols(std::size_t n) const;

 private:
  struct Impl {
    bool finite = true;
    std::vector<Symbol> symbols;
    Membership membership;
    Incidence incidence;
    Family family = Family::Custom;
    std::string name;
    SuccessorHint successors;
    LoopSymbolBound loop_bound;
  };
  explicit ShiftSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// A finite admissible word. Ordered by (length, lexicographic).
struct Word {
  std::vector<Symbol> symbols;

  std::size_t length() const noexcept { return symbols.size(); }
  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) {
    if (a.symbols.size() != b.symbols.size()) return a.symbols.size() < b.symbols.size();
    return a.symbols < b.symbols;
  }
};

/// True iff every consecutive pair passes the incidence oracle. Throws
/// DomainError on an empty sequence or a symbol outside the alphabet.
bool is_admissible(const ShiftSpec& spec, std::span<const Symbol> symbols);

class WordCollection {
 public:
  enum class Kind { AllWords, Periodic, PeriodicAt, StartingIn, Bridges, Custom };
  using Predicate = std::function<bool(std::span<const Symbol>)>;

  static WordCollection all();
  static WordCollection periodic();
  static WordCollection periodic_at(Symbol a);
  static WordCollection starting_in(std::vector<Symbol> start);
  static WordCollection bridges(std::vector<Symbol> start, std::vector<Symbol> terminal);
  static WordCollection custom(std::string name, Predicate predicate);

  Kind kind() const noexcept { return kind_; }
  Symbol anchor() const noexcept { return anchor_; }
  const std::vector<Symbol>& start_set() const noexcept { return start_; }
  const std::vector<Symbol>& terminal_set() const noexcept { return terminal_; }

  /// Whether an admissible word may begin with s.
  bool allows_first(Symbol s) const;
  /// Membership of an admissible word. Periodic kinds consult the incidence
  /// of the closing pair (last, first).
  bool contains(const ShiftSpec& spec, std::span<const Symbol> word) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::AllWords;
  Symbol anchor_ = 0;
  std::vector<Symbol> start_;
  std::vector<Symbol> terminal_;
  std::string name_;
  Predicate predicate_;
};

/// A finite retained symbol set with the induced finite shift and successor
/// lists in local indices.
class Truncation {
 public:
  const ShiftSpec& owner() const noexcept { return data_->owner; }
  const ShiftSpec& induced() const noexcept { return data_->induced; }
  const std::vector<Symbol>& retained() const noexcept { return data_->retained; }
  std::size_t size() const noexcept { return data_->retained.size(); }
  bool empty() const noexcept { return data_->retained.empty(); }

  std::optional<std::size_t> index_of(Symbol s) const;
  bool retains(Symbol s) const { return index_of(s).has_value(); }
  Symbol symbol(std::size_t index) const { return data_->retained[index]; }
  /// Successors of the local state i, as sorted local indices.
  std::span<const std::size_t> successors(std::size_t i) const;
  bool edge(std::size_t from, std::size_t to) const;
  std::size_t edge_count() const noexcept { return data_->targets.size(); }

 private:
  friend Truncation truncate(const ShiftSpec& spec, std::vector<Symbol> retained);
  struct Data {
    ShiftSpec owner;
    ShiftSpec induced;
    std::vector<Symbol> retained;
    bool contiguous = false;  // retained == {first .. first+n-1}
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> targets;
  };
  explicit Truncation(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// Restricts spec to a finite retained set. Throws DomainError for symbols
/// outside the alphabet. Duplicates are removed.
Truncation truncate(const ShiftSpec& spec, std::vector<Symbol> retained);
/// Retains the first n alphabet members.
Truncation truncate_prefix(const ShiftSpec& spec, std::size_t n);
/// Identity truncation of a finite spec.
Truncation truncate_all(const ShiftSpec& spec);

/// Dense 0/1 incidence matrix over the retained symbols (row-major).
std::vector<std::vector<int>> incidence_matrix(const Truncation& trunc);

using WordVisitor = std::function<void(std::span<const Symbol>)>;

/// Yields each member of collection over the retained symbols with length
/// <= max_len exactly once, in (length, lexicographic) order. Throws
/// DomainError when max_len is zero.
void enumerate_words(const Truncation& trunc, const WordCollection& collection,
                     std::size_t max_len, const WordVisitor& visit);
std::vector<Word> collect_words(const Truncation& trunc, const WordCollection& collection,
                                std::size_t max_len);

}  // namespace ipress
