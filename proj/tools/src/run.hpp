#pragma once

// Dispatch of a validated configuration to the library and serialization of
// the outcome.

#include <json.hpp>

#include <string>
#include <vector>

#include "config.hpp"
#include "ipress/group.hpp"
#include "ipress/potential.hpp"
#include "ipress/pressure.hpp"
#include "ipress/shift.hpp"

namespace ipress::cli {

inline constexpr const char* kVersion = "0.1.0";

struct Report {
  nlohmann::json payload;  ///< command, resolved configuration, results
  bool divergent = false;  ///< some reported pressure is +inf
  /// Sequence outputs (gap tables, exhaustion sequences) for CSV.
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

ShiftSpec build_shift(const ShiftDecl& decl);
Potential build_potential(const RunConfig& config, const std::string& ref, const std::string& field);
WordCollection build_collection(const CollectionDecl& decl);
Truncation build_truncation(const RunConfig& config, const ShiftSpec& spec);
GroupModel build_group(const std::string& model);
ExtensionVariant build_variant(const std::string& variant);

/// Runs the configured command. Library errors propagate unchanged.
Report run(const RunConfig& config);

/// JSON number, or "inf" / "-inf" / null for non-finite values.
nlohmann::json number(double x);
nlohmann::json to_json(const PressureResult& result);

/// Full document: {"meta": {...}, "command": ..., ...payload}.
nlohmann::json envelope(const Report& report, const RunConfig& config, double wall_time_s);
std::string render(const Report& report, const RunConfig& config, double wall_time_s);

}  // namespace ipress::cli
