#pragma once

// Built-in systems with known answers.

#include <string>
#include <vector>

#include "config.hpp"

namespace ipress::cli {

struct ExpectedValue {
  std::string quantity;
  double value = 0.0;   ///< NaN when the expectation is a relation, see `relation`
  std::string display;  ///< closed form, e.g. "log 2"
  std::string relation;
};

struct Fixture {
  std::string name;
  std::string description;
  std::string reference;  ///< the classical source of the expected values
  RunConfig config;
  std::vector<ExpectedValue> expected;
};

const std::vector<Fixture>& fixture_catalog();
const Fixture* find_fixture(const std::string& name);

}  // namespace ipress::cli
