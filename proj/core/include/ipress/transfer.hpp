#pragma once

// Weighted transition graphs over a truncation and their Perron data.
//
// States are retained symbols for potentials of depth <= 2 and admissible
// (depth-1)-tuples otherwise. An edge u -> v carries the potential evaluated
// on the tuple u followed by the last symbol of v.

#include <cstddef>
#include <span>
#include <vector>

#include "ipress/potential.hpp"
#include "ipress/shift.hpp"

namespace ipress {

class TransferGraph {
 public:
  /// Throws ResourceError when the tuple state space exceeds max_states.
  TransferGraph(const Truncation& trunc, std::size_t depth, std::size_t max_states = 2'000'000);

  const Truncation& truncation() const noexcept { return trunc_; }
  /// Length of the symbol tuple carried by each state.
  std::size_t memory() const noexcept { return memory_; }
  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const Symbol> state(std::size_t u) const {
    return {tuples_.data() + u * memory_, memory_};
  }
  Symbol first_symbol(std::size_t u) const { return tuples_[u * memory_]; }
  Symbol last_symbol(std::size_t u) const { return tuples_[u * memory_ + memory_ - 1]; }

  std::size_t edge_begin(std::size_t u) const { return offsets_[u]; }
  std::size_t edge_end(std::size_t u) const { return offsets_[u + 1]; }
  std::size_t target(std::size_t e) const { return targets_[e]; }

  /// Per-edge values of p, in edge order. p.depth() must not exceed the
  /// depth the graph was built for.
  std::vector<double> edge_values(const Potential& p) const;

 private:
  Truncation trunc_;
  std::size_t depth_;
  std::size_t memory_;
  std::vector<Symbol> tuples_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
};

/// Strongly connected components, numbered in Tarjan completion order.
struct Components {
  std::vector<std::size_t> component_of;
  std::vector<std::vector<std::size_t>> members;  ///< sorted state lists
  std::vector<bool> nontrivial;                   ///< carries a cycle
};

Components strongly_connected_components(const TransferGraph& graph);

/// Nontrivial components whose cycles contribute to the growth of the
/// collection. Custom collections raise PreconditionError.
std::vector<std::size_t> relevant_components(const TransferGraph& graph, const Components& comps,
                                             const WordCollection& collection);

struct PerronOptions {
  double relative_tolerance = 1e-13;
  std::size_t max_iterations = 1'000'000;
};

struct SpectralRadius {
  double log_radius = 0.0;  ///< -inf when no component is given
  double log_lower = 0.0;   ///< Collatz-Wielandt bracket
  double log_upper = 0.0;
  std::size_t iterations = 0;
  std::size_t component = 0;  ///< maximizing component
};

/// log of the largest Perron root over the listed components, for the
/// matrix with entries exp(log_weights[e]).
SpectralRadius log_spectral_radius(const TransferGraph& graph, std::span<const double> log_weights,
                                   const Components& comps,
                                   std::span<const std::size_t> which,
                                   const PerronOptions& options = {});

struct PerronVectors {
  double log_radius = 0.0;
  std::vector<std::size_t> states;  ///< component members
  std::vector<double> left;         ///< indexed like states, sum 1
  std::vector<double> right;        ///< indexed like states, max 1
  std::size_t iterations = 0;
};

/// Left and right Perron vectors of one irreducible component.
PerronVectors perron_vectors(const TransferGraph& graph, std::span<const double> log_weights,
                             const Components& comps, std::size_t component,
                             const PerronOptions& options = {});

/// Classical pressure of p on the truncated shift: log of the spectral radius
/// of the transfer matrix, maximized over irreducible components. -inf when
/// the truncation carries no infinite word.
double finite_pressure(const Truncation& trunc, const Potential& p,
                       const PerronOptions& options = {});

}  // namespace ipress
