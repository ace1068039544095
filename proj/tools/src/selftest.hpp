#pragma once

#include <string>
#include <vector>

namespace ipress::cli {

struct SelftestLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Property suite on `seeds` random finite fixtures, then the golden values
/// of the fixture catalog.
std::vector<SelftestLine> selftest(unsigned seeds = 50);

}  // namespace ipress::cli
