#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "awlab/graph.hpp"

namespace awlab {

struct EstimateReport {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(trials)
  std::size_t trials = 0;
  std::size_t truncated = 0;  // trials still running at the horizon
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  /// Truncated trials make the mean a lower estimate.
  bool biased() const noexcept { return truncated > 0; }
};

struct WalkOptions {
  std::size_t trials = 10000;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double max_truncated_fraction = 0.1;
};

/// tau_A = first step index outside A, for walks started at the root.
/// Truncated trials contribute the horizon. Throws RootNotInRegion,
/// InvalidArgument (horizon 0 or no trials), ExcessiveTruncation.
EstimateReport simulate_exit(const WeightedGraph& g, const Region& a, const WalkOptions& options);

/// Number of time indices in [0, horizon) spent in A. The walk may leave and
/// re-enter A and stops only when it steps into the frame.
EstimateReport simulate_occupation(const WeightedGraph& g, const Region& a, const WalkOptions& options);

/// d(o, X_steps) / steps per trial, hop distance from the root. A walk that
/// steps into the frame stays there. steps = 0 gives zeros.
std::vector<double> simulate_displacement(const WeightedGraph& g, std::uint64_t steps, std::size_t trials,
                                          std::uint64_t seed, unsigned threads = 0);

/// Same samples for the walk on the infinite q-regular tree, expanded lazily
/// along the current path so no truncation depth is needed.
std::vector<double> simulate_tree_displacement(int q, std::uint64_t steps, std::size_t trials, std::uint64_t seed,
                                               unsigned threads = 0);

/// Finite q-regular tree rooted at label 0 with unit weights; vertices at
/// depth `depth` form the frame.
WeightedGraph regular_tree(int q, int depth);

/// Samples `draws` steps from x and returns the empirical frequency of each
/// neighbour, in neighbors(x) order.
std::vector<double> empirical_step_law(const WeightedGraph& g, Vertex x, std::size_t draws, std::uint64_t seed);

}  // namespace awlab
