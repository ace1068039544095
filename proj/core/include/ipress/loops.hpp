#pragma once

// Simple loops of concatenation-closed collections, induced potentials on the
// loop alphabet, and pressure from the loop generating series
//   Z(beta) = sum over simple loops of exp(phi~ - beta psi~).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ipress/numeric.hpp"
#include "ipress/potential.hpp"
#include "ipress/pressure.hpp"
#include "ipress/shift.hpp"

namespace ipress {

/// A simple loop stored as its branching prefix followed by `chain` forced
/// symbols that lead back to the anchor.
struct LoopRecord {
  std::vector<Symbol> head;
  std::size_t chain = 0;

  std::size_t length() const noexcept { return head.size() + chain; }
};

struct LoopOptions {
  std::size_t max_loops = 2'000'000;
  unsigned threads = 1;  ///< first-step branches are split across threads
};

class LoopInventory {
 public:
  /// Explicit: individual loops. Series: implicit, all loops at an anchor of a
  /// finite truncation, summed by a transfer recurrence. Aggregated: counts
  /// per length only.
  enum class Kind { Explicit, Series, Aggregated };

  Kind kind() const noexcept { return kind_; }
  const WordCollection& collection() const noexcept { return collection_; }
  std::size_t max_length() const noexcept { return max_length_; }
  /// True when no simple loop longer than max_length() exists in the source.
  bool exhausted() const noexcept { return exhausted_; }
  const std::optional<Truncation>& truncation() const noexcept { return trunc_; }
  const std::string& source() const noexcept { return source_; }

  const std::vector<LoopRecord>& loops() const noexcept { return loops_; }
  std::size_t loop_count() const noexcept { return loops_.size(); }
  Word expand(std::size_t i) const;

  /// log of the number of loops of each length, index 0..max_length();
  /// -inf where there are none.
  const std::vector<double>& log_counts() const noexcept { return log_counts_; }
  /// Exact counts per length, explicit inventories only.
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  /// Per length: no larger truncation can add loops of that length.
  const std::vector<bool>& complete() const noexcept { return complete_; }

  static LoopInventory aggregated(WordCollection collection, std::vector<double> log_counts,
                                  bool exhausted, std::string source);

 private:
  friend LoopInventory enumerate_simple_loops(const ShiftSpec&, const WordCollection&,
                                              const Truncation&, std::size_t,
                                              const LoopOptions&);
  friend LoopInventory series_inventory(const Truncation&, Symbol, std::size_t);

  Kind kind_ = Kind::Explicit;
  WordCollection collection_;
  std::size_t max_length_ = 0;
  bool exhausted_ = false;
  std::optional<Truncation> trunc_;
  std::string source_;
  std::vector<LoopRecord> loops_;
  std::vector<double> log_counts_;
  std::vector<std::uint64_t> counts_;
  std::vector<bool> complete_;
};

/// All simple loops of length <= max_len inside the truncation, ordered by
/// (length, word). collection must be PeriodicAt(a) or Bridges(J_s, J_t);
/// bridges additionally need A(t, s) = 1 for t in J_t, s in J_s so that the
/// collection is closed under concatenation.
LoopInventory enumerate_simple_loops(const ShiftSpec& spec, const WordCollection& collection,
                                     const Truncation& trunc, std::size_t max_len,
                                     const LoopOptions& options = {});

/// Loops at `anchor` of a finite truncation in series form.
LoopInventory series_inventory(const Truncation& trunc, Symbol anchor, std::size_t max_len);

/// Birkhoff sums of p over each loop, continuation pinned to the anchor.
/// Explicit inventories give one value per loop; aggregated inventories one
/// value per length (constant potentials only).
struct InducedPotential {
  std::string name;
  std::vector<double> values;
  bool per_length = false;
};

InducedPotential induce_potential(const Potential& p, const LoopInventory& inv);

/// Bounds on the part of Z(beta) carried by loops beyond the inventory cap,
/// as logarithms (-inf for zero, +inf for divergence).
struct TailBounds {
  double log_lower = -kInf;
  double log_upper = kInf;
};

class TailMajorant {
 public:
  using Bounds = std::function<TailBounds(double beta)>;

  TailMajorant(std::string description, Bounds bounds);

  /// Loops of length l > cap carry total phi~-weight at most
  /// exp(a0 + a1 l + a2 log l), with b_lo l <= psi~ <= b_hi l. Upper bound
  /// only.
  static TailMajorant parametric(std::size_t cap, double a0, double a1, double a2, double b_lo,
                                 double b_hi);
  /// One loop per length k > cap with phi~ = 0 and psi~ = log(k(k+1)).
  static TailMajorant harmonic(std::size_t cap);

  TailBounds operator()(double beta) const { return bounds_(beta); }
  const std::string& description() const noexcept { return description_; }

 private:
  std::string description_;
  Bounds bounds_;
};

struct LoopPressureOptions {
  double tolerance = 1e-10;
  std::optional<TailMajorant> tail;
  /// Series inventories stop summing once the certified tail falls below
  /// this fraction of the partial sum.
  double series_relative_tail = 1e-17;
};

/// Root of Z(beta) = 1. Without a tail bound the value is the certified lower
/// bound from the loops present and the upper end is +inf (or equal to the
/// value when the inventory is exhausted). With a tail bound, the value is
/// the midpoint of the two roots.
PressureResult loop_pressure(const LoopInventory& inv, const Potential& phi, const Potential& psi,
                             const LoopPressureOptions& options = {});

}  // namespace ipress
