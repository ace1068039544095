#pragma once

// Finite-memory potentials and their Birkhoff sums over words.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipress/shift.hpp"

namespace ipress {

/// Declared sign information. Every evaluation is checked against it and a
/// violation raises PreconditionError.
struct SignFlags {
  bool nonnegative = false;
  bool strictly_positive = false;
  std::optional<double> lower_bound;  ///< value >= *lower_bound > 0

  bool positive() const noexcept { return strictly_positive || (lower_bound && *lower_bound > 0.0); }
};

/// A real function on the shift depending on the first `depth` coordinates.
class Potential {
 public:
  using Oracle = std::function<double(std::span<const Symbol>)>;

  Potential(std::string name, std::size_t depth, Oracle value, SignFlags flags = {});

  static Potential zero();
  static Potential constant(double c);
  /// log 2 on [1], log((n+1)/(n-1)) on [n] for n >= 2.
  static Potential alpha_farey_geometric();
  /// omega -> -omega_1.
  static Potential first_symbol_negated();
  /// Explicit table of (tuple -> value). Tuples missing from the table raise
  /// DomainError on evaluation.
  static Potential from_table(std::size_t depth,
                              const std::vector<std::pair<std::vector<Symbol>, double>>& rows,
                              SignFlags flags = {}, std::string name = "table");
  /// h - h o sigma, of depth depth(h) + 1.
  static Potential coboundary(const Potential& h);

  std::size_t depth() const noexcept { return depth_; }
  const std::string& name() const noexcept { return name_; }
  const SignFlags& flags() const noexcept { return flags_; }
  /// Set when the potential is known to be constant.
  std::optional<double> constant_value() const noexcept { return constant_; }

  /// Evaluates on the first depth() symbols of tuple (tuple.size() >= depth()).
  double operator()(std::span<const Symbol> tuple) const;
  double at(Symbol s) const { return (*this)(std::span<const Symbol>(&s, 1)); }

  Potential with_flags(SignFlags flags) const;
  Potential renamed(std::string name) const;

 private:
  std::string name_;
  std::size_t depth_;
  std::shared_ptr<const Oracle> value_;
  SignFlags flags_;
  std::optional<double> constant_;

  friend Potential combine(const Potential&, const Potential&, std::pair<double, double>);
};

/// Pointwise a*p1 + b*p2 with depth max(depth(p1), depth(p2)). Sign flags are
/// kept only where they follow from the inputs and the coefficient signs.
Potential combine(const Potential& p1, const Potential& p2, std::pair<double, double> coeffs);

enum class BoundaryMode { Exact, Sup, Inf };

std::string to_string(BoundaryMode mode);

struct BirkhoffSum {
  Word word;
  double value = 0.0;
  BoundaryMode boundary = BoundaryMode::Exact;
};

/// Sum of p along the first |w| shift iterates on the cylinder of w.
///
/// The trailing depth-1 lookahead symbols come from `continuation` when it is
/// long enough; the result is then Exact whatever mode was asked for. Otherwise
/// the missing symbols range over admissible completions inside `trunc`: Sup
/// and Inf return the extreme sums, Exact succeeds only if all completions
/// agree and raises ModeError if not.
BirkhoffSum birkhoff_sum(const Potential& p, const ShiftSpec& spec, std::span<const Symbol> w,
                         BoundaryMode mode, std::span<const Symbol> continuation = {},
                         const Truncation* trunc = nullptr);

}  // namespace ipress
