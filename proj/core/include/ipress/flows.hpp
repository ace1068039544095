#pragma once

// Pressure of special semi-flows over a Markov shift: the loop pressure of
// the fiber integral Delta_g with the height function tau as time.

#include <cstddef>
#include <optional>

#include "ipress/loops.hpp"
#include "ipress/potential.hpp"
#include "ipress/pressure.hpp"
#include "ipress/shift.hpp"

namespace ipress {

struct FlowSpec {
  ShiftSpec base;
  Potential tau;      ///< height, declared strictly positive
  Potential delta_g;  ///< integral of g over each fiber
};

struct FlowOptions {
  std::size_t loop_cap = 10'000;
  std::optional<Symbol> at;  ///< base symbol; chosen automatically when empty
  LoopOptions loops;
  LoopPressureOptions pressure;
  /// On irreducible finite truncations, repeat at a second symbol and record
  /// the difference in the diagnostics.
  bool cross_check = true;
};

/// P(g | flow) = sup over base symbols a of P_tau(Delta_g, periodic at a).
PressureResult flow_pressure(const FlowSpec& flow, const Truncation& trunc, const FlowOptions& options = {});

/// Topological entropy of the flow: flow_pressure with Delta_g = 0.
PressureResult savchenko_entropy(const ShiftSpec& base, const Potential& tau, const Truncation& trunc,
                                 const FlowOptions& options = {});

}  // namespace ipress
