#pragma once

// Run configuration: a YAML document, optionally seeded from a named fixture,
// with command-line flags applied last.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipress/shift.hpp"

namespace ipress::cli {

struct PotentialDecl {
  std::string kind = "zero";  ///< zero | constant | alpha-farey | first-symbol-negated | table
  double value = 0.0;         ///< constant
  std::size_t depth = 1;      ///< table
  std::vector<std::pair<std::vector<Symbol>, double>> rows;
  bool nonnegative = false;
  bool strictly_positive = false;
  std::optional<double> lower_bound;

  friend bool operator==(const PotentialDecl&, const PotentialDecl&) = default;
};

struct ShiftDecl {
  std::string family = "full";  ///< full | renewal | matrix
  std::size_t n = 2;
  std::vector<std::vector<int>> matrix;

  friend bool operator==(const ShiftDecl&, const ShiftDecl&) = default;
};

struct CollectionDecl {
  std::string kind = "all";  ///< all | periodic | periodic-at | starting-in | bridges
  Symbol anchor = 1;
  std::vector<Symbol> start;
  std::vector<Symbol> terminal;

  friend bool operator==(const CollectionDecl&, const CollectionDecl&) = default;
};

struct TailDecl {
  std::string kind = "harmonic";  ///< harmonic | parametric
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, b_lo = 1.0, b_hi = 1.0;

  friend bool operator==(const TailDecl&, const TailDecl&) = default;
};

struct NumericDecl {
  std::optional<std::size_t> trunc;  ///< prefix size; whole alphabet when absent on finite shifts
  std::size_t max_len = 10'000;
  double eta = 1.0;
  std::vector<double> t_grid;
  std::optional<double> t_max;
  double tolerance = 1e-10;
  std::size_t length_cap = 64;
  std::vector<std::size_t> sizes;  ///< exhaustion
  std::optional<TailDecl> tail;

  friend bool operator==(const NumericDecl&, const NumericDecl&) = default;
};

struct GroupDecl {
  std::string model = "z^1";  ///< z^d | free:k | file:PATH
  std::string variant = "plain";
  std::size_t nmax = 1000;

  friend bool operator==(const GroupDecl&, const GroupDecl&) = default;
};

struct FlowDecl {
  std::string tau = "one";
  std::string delta_g = "zero";
  std::optional<Symbol> at;

  friend bool operator==(const FlowDecl&, const FlowDecl&) = default;
};

struct RunConfig {
  std::string command = "pressure";  ///< pressure | gurevich | loops | group-ext | flow
  std::optional<std::string> fixture;
  ShiftDecl shift;
  std::map<std::string, PotentialDecl> potentials;
  std::string phi = "zero";
  std::string psi = "one";
  CollectionDecl collection;
  std::string method = "pseudo-inverse";
  NumericDecl numeric;
  GroupDecl group;
  FlowDecl flow;
  std::string output = "json";  ///< json | csv | text
  unsigned threads = 1;
  bool counts_only = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a YAML document. A `fixture:` key seeds the result from the
/// catalog before the remaining keys are applied. Raises ValidationError
/// naming the offending field.
RunConfig parse_config(const std::string& text);

/// Applies a YAML document on top of an existing configuration.
void overlay_config(RunConfig& config, const std::string& text);

/// Canonical YAML form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Checks names and ranges; raises ValidationError.
void validate(const RunConfig& config);

/// Resolves a potential reference: a declared name, or one of zero, one,
/// alpha-farey, neg-first, const:C, table:v1,v2,...
PotentialDecl resolve_potential(const RunConfig& config, const std::string& ref, const std::string& field);

/// Maps the short method names (pseudo, exhaust) to their full names.
std::string canonical_method(const std::string& name);

/// FNV-1a of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace ipress::cli
