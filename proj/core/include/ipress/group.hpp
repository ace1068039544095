#pragma once

// Group extensions of the full shift on k generators: counting closed paths
// in the Cayley graph, the amenability gap, and the extension as a countable
// Markov shift on (letter, group element) pairs.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ipress/loops.hpp"
#include "ipress/shift.hpp"

namespace ipress {

using BigInt = boost::multiprecision::cpp_int;

/// Natural logarithm of a positive big integer; -inf for zero.
double log_big(const BigInt& n);

class GroupModel {
 public:
  enum class Kind { ZPower, FreeGroup, FiniteTable, Quotient };
  using Element = std::vector<std::int64_t>;

  /// Z^d with generators e_1..e_d.
  static GroupModel z_power(std::size_t d);
  /// Free group on k generators; elements are reduced words with letters
  /// +-(i+1).
  static GroupModel free_group(std::size_t k);
  /// Finite group from a multiplication table over 0..n-1 with identity 0.
  /// Generators default to one element of each pair {g, g^-1} of
  /// non-identity elements.
  static GroupModel finite_table(std::vector<std::vector<std::size_t>> table,
                                 std::vector<std::string> names = {},
                                 std::vector<std::size_t> generators = {});
  /// Parses "name name ..." followed by one table row per line.
  static GroupModel finite_table_from_text(const std::string& text);
  /// Free group on k generators mapped onto a Z^d or finite-table target;
  /// image[i] is the target element of generator i.
  static GroupModel quotient(std::size_t k, const GroupModel& target, std::vector<Element> images);

  Kind kind() const noexcept { return kind_; }
  /// Number of generators; letters are 0..2k-1 with i + k the inverse of i.
  std::size_t generator_count() const noexcept { return k_; }
  std::size_t letter_count() const noexcept { return 2 * k_; }
  std::size_t inverse_letter(std::size_t i) const { return i < k_ ? i + k_ : i - k_; }

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element letter(std::size_t i) const;

  bool is_finite() const noexcept;
  std::size_t order() const;  ///< finite groups only
  /// True when the map from the free group is injective (free groups).
  bool trivial_kernel() const noexcept { return kind_ == Kind::FreeGroup; }
  std::string describe() const;

  const GroupModel* target() const noexcept { return target_.get(); }
  const std::vector<Element>& images() const noexcept { return images_; }

 private:
  Kind kind_ = Kind::ZPower;
  std::size_t k_ = 0;
  std::size_t dim_ = 0;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::string> names_;
  std::vector<std::size_t> generators_;
  std::shared_ptr<const GroupModel> target_;
  std::vector<Element> images_;
};

/// Plain: every letter may follow every letter. NoBacktrack: a letter may not
/// be followed by its inverse.
enum class ExtensionVariant { Plain, NoBacktrack };

std::string to_string(ExtensionVariant v);

struct ExtensionShift {
  GroupModel group;
  ExtensionVariant variant = ExtensionVariant::Plain;

  ExtensionShift(GroupModel g, ExtensionVariant v);
  std::string describe() const;
};

struct CountOptions {
  bool use_fast_paths = true;
  std::size_t max_states = 5'000'000;
};

enum class PathConstraint { All, ReturnToId };

/// Number of admissible letter sequences of length n (ending at the identity
/// for ReturnToId).
BigInt count_paths(const ExtensionShift& ext, std::size_t n, PathConstraint constraint,
                   const CountOptions& options = {});
/// Closed-path counts for n = 0..n_max.
std::vector<BigInt> return_counts(const ExtensionShift& ext, std::size_t n_max,
                                  const CountOptions& options = {});
/// Paths returning to the identity for the first time at step n, 0..n_max.
std::vector<BigInt> count_first_returns(const ExtensionShift& ext, std::size_t n_max,
                                        const CountOptions& options = {});

struct GapRow {
  std::size_t n = 0;
  double log_count = 0.0;
  double rate = 0.0;  ///< log_count / n
};

struct GapReport {
  enum class Verdict { AmenableConsistent, NonamenableConsistent, Inconclusive };

  double full_pressure = 0.0;  ///< log of the growth of all paths
  double estimate = 0.0;       ///< max of (1/n) log Z_n over the even-n tail
  double gap = 0.0;            ///< full_pressure - estimate
  double slope = 0.0;          ///< fitted limit of (1/n) log Z_n
  double slope_se = 0.0;
  double gap_fit = 0.0;        ///< full_pressure - slope
  double tolerance = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<GapRow> table;
};

std::string to_string(GapReport::Verdict v);

GapReport pressure_gap(const ExtensionShift& ext, std::size_t n_max, const CountOptions& options = {});

/// The skew product as a Markov shift. Symbol 1 + letter + 2k * index(h)
/// stands for the pair (letter, h), h the element before the letter is
/// applied; elements are indexed in breadth-first order from the identity.
/// Start symbols have h = id; terminal symbols have h * letter = id.
struct ExtensionSpec {
  ShiftSpec spec;
  std::vector<Symbol> start;
  std::vector<Symbol> terminal;
  std::function<GroupModel::Element(Symbol)> element_of;
  std::function<std::size_t(Symbol)> letter_of;
};

ExtensionSpec extension_shift_spec(const ExtensionShift& ext);

/// First-return counts as an aggregated bridge inventory (Plain only).
LoopInventory bridge_inventory(const ExtensionShift& ext, std::size_t max_len,
                               const CountOptions& options = {});

struct IrreducibilityReport {
  bool finite_state_space = false;
  bool finitely_irreducible = false;
  std::size_t reachable_states = 0;
  std::size_t connecting_words = 0;
  std::size_t max_connector_length = 0;
  std::string detail;
};

/// For finite groups: whether every pair of states is joined by an
/// admissible word, and a small connecting family.
IrreducibilityReport check_finite_irreducibility(const ExtensionShift& ext);

}  // namespace ipress
