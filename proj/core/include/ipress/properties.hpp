#pragma once

// Random finite fixtures and the structural inequalities of the induced
// pressure, evaluated with the pseudo-inverse on finite shifts.

#include <cstdint>
#include <string>
#include <vector>

#include "ipress/potential.hpp"
#include "ipress/pressure.hpp"
#include "ipress/shift.hpp"

namespace ipress {

struct RandomFixture {
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> matrix;
  ShiftSpec spec;
  Truncation trunc;
  Potential phi;  ///< depth 1, values in [-1, 1]
  Potential psi;  ///< depth 1, values in [0.5, 2]
  std::vector<double> phi_values;
  std::vector<double> psi_values;
};

/// Every row has a successor; with `irreducible` the matrix is redrawn until
/// the shift is irreducible.
RandomFixture random_fixture(std::uint64_t seed, std::size_t symbols = 5, bool irreducible = false);

/// Depth-1 table potential with the given values on symbols 1..n.
Potential symbol_potential(const std::vector<double>& values, std::string name, bool positive = false);

struct PropertyOutcome {
  std::string name;
  bool passed = true;
  double worst = 0.0;  ///< largest violation seen
  std::size_t checks = 0;
  std::string detail;
};

std::vector<PropertyOutcome> run_property_suite(const RandomFixture& fixture, double tolerance = 1e-9);

/// Merges outcomes of the same name across fixtures.
std::vector<PropertyOutcome> merge_outcomes(const std::vector<std::vector<PropertyOutcome>>& runs);

}  // namespace ipress
