#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "awlab/graph.hpp"
#include "awlab/green.hpp"
#include "awlab/profile_function.hpp"

namespace awlab {

enum class IsoMethod { Exhaustive, LevelSet, Sampled };

const char* to_string(IsoMethod method) noexcept;

/// Minimum of mu(boundary A) / F(m(A)) over a family of connected,
/// root-containing sets of non-frame vertices.
struct IsoReport {
  IsoMethod method = IsoMethod::Exhaustive;
  double constant = 0.0;          // ratio recomputed on the witness
  std::vector<Label> witness;     // sorted labels
  double witness_measure = 0.0;
  double witness_boundary = 0.0;
  std::uint64_t examined = 0;     // sets evaluated
  std::size_t min_size = 0, max_size = 0;
  double min_measure = 0.0, max_measure = 0.0;
  std::size_t samples = 0;        // sampled method only
  std::uint64_t seed = 0;         // sampled method only
};

/// mu(boundary A) / F(m(A)) with a fixed summation order.
double iso_ratio(const WeightedGraph& g, const ProfileFunction& f, const Region& a);

/// Exact minimum over all connected A containing the root with
/// |A| <= max_vertices. Each set is generated once by extension-set
/// expansion (vertices skipped at a branch are excluded from its later
/// siblings). Throws BudgetExceeded once more than `budget` sets are visited.
IsoReport cis_exhaustive(const WeightedGraph& g, const ProfileFunction& f, std::size_t max_vertices,
                         std::uint64_t budget = 10'000'000, unsigned threads = 0);

/// Minimum over the distinct level sets {G >= b} of the field, b ranging over
/// the positive snapped Green values. This is the largest constant for which
/// check_edu can hold on the instance.
IsoReport cis_levelsets(const WeightedGraph& g, const GreenField& gf, const ProfileFunction& f);

enum class Growth { Weighted, Uniform };

struct SamplingOptions {
  std::size_t samples = 1000;
  double max_measure = 0.0;     // stop before m(A) exceeds this; 0 = unlimited
  std::size_t max_vertices = 0; // 0 = unlimited
  std::uint64_t seed = 0;
  Growth growth = Growth::Weighted;  // Weighted: pick a boundary edge with probability prop. to mu
  unsigned threads = 0;
};

/// Grows `samples` random connected sets from the root and evaluates every
/// prefix. An upper estimate of the anchored constant, deterministic in the
/// seed. Throws InvalidArgument if the root alone exceeds the measure cap.
IsoReport cis_sampled(const WeightedGraph& g, const ProfileFunction& f, const SamplingOptions& options);

struct BetacViolation {
  std::size_t sample = 0;
  std::size_t size = 0;
  double measure = 0.0;
  double boundary = 0.0;
  double ratio = 0.0;
};

struct BetacReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t large_sets = 0;       // prefixes with m(A) >= N0
  std::uint64_t violation_count = 0;
  std::vector<BetacViolation> violations;  // first ones in sample order
  double min_ratio = 0.0;             // min mu(dA) / m(A)^(1 - 1/d) over large sets (+inf if none)
  double small_set_min_boundary = 0.0;  // min mu(dA) over prefixes with m(A) < N0 (+inf if none)
};

struct BetacOptions {
  std::size_t samples = 1000;
  double max_measure = 0.0;  // growth cap; 0 means 8 * N0
  std::uint64_t seed = 0;
  Growth growth = Growth::Weighted;
  unsigned threads = 0;
  std::size_t keep_violations = 100;
};

/// Samples connected root-containing sets and reports those with
/// m(A) >= n0 and mu(dA) / m(A)^(1 - 1/d) < beta0.
BetacReport verify_betac(const WeightedGraph& env_graph, double d, double beta0, double n0,
                         const BetacOptions& options);

}  // namespace awlab
