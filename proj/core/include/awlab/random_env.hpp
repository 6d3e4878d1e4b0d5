#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "awlab/graph.hpp"

namespace awlab {

/// Law of a single conductance, with values in [0, 1].
class EnvironmentLaw {
 public:
  enum class Kind { Uniform01, Bernoulli, Quantile };

  /// Uniform on (0, 1].
  static EnvironmentLaw uniform01();
  /// 1 with probability p, else 0.
  static EnvironmentLaw bernoulli(double p);
  /// Discrete law: (probability, value) atoms with probabilities summing to 1.
  static EnvironmentLaw quantile(std::vector<std::pair<double, double>> atoms);
  /// "uniform01", "bernoulli:0.7", "quantile:0.5@0.1,0.5@1".
  static EnvironmentLaw parse(const std::string& text);

  /// Inverse-CDF draw from u in [0, 1).
  double draw(double u) const;
  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  /// True iff a zero conductance has probability zero.
  bool all_positive() const noexcept;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Uniform01;
  double p_ = 1.0;
  std::vector<std::pair<double, double>> atoms_;
};

/// Box [-n, n]^d of Z^d around the origin. Vertices outside the box that are
/// adjacent to it form the absorbing frame.
struct LatticeBox {
  int d = 2;
  int n = 0;
  /// Odd side length 2n + 1.
  static LatticeBox from_side(int d, int side);
  int side() const noexcept { return 2 * n + 1; }
  std::size_t interior_count() const;
};

/// Coordinates are offset by kLatticeOffset and packed in base
/// 2 * kLatticeOffset + 1, so labels do not depend on the box size.
inline constexpr int kLatticeOffset = 4096;
inline constexpr int kMaxLatticeDimension = 4;

Label lattice_label(std::span<const int> coords);
std::vector<int> lattice_coords(Label label, int d);

/// Nearest-neighbour edges with both ends in the box plus the edges from the
/// box to its frame, each with weight 1; sorted by (u, v), u < v by label.
std::vector<EdgeSpec> lattice_edges(const LatticeBox& box);
std::vector<Label> lattice_frame(const LatticeBox& box);

/// Conductance draw for every edge of the box (frame edges included).
/// Each edge uses its own hash of (seed, lower endpoint, axis), so draws do
/// not depend on iteration order or on the box size.
struct Environment {
  LatticeBox box;
  EnvironmentLaw law;
  std::uint64_t seed = 0;
  std::vector<EdgeSpec> edges;  // same order as lattice_edges(box); weight = conductance

  /// Conductance of the edge {a, b}; throws InvalidArgument if it is not in the box.
  double conductance(Label a, Label b) const;
};

Environment sample_environment(const EnvironmentLaw& law, const LatticeBox& box, std::uint64_t seed,
                               unsigned threads = 0);

/// mu = conductance on every positive edge, frame = lattice_frame(box).
/// Throws RootIsolated if every edge at the origin is closed.
WeightedGraph environment_graph(const Environment& env);

/// Unit conductances on the box.
WeightedGraph lattice_graph(int d, int n);

struct PercolationCluster {
  WeightedGraph graph;
  bool touches_shell = false;   // some open edge leads from the cluster to the frame
  std::size_t interior_size = 0;
};

/// Open cluster of the origin inside the box, with the frame restricted to
/// shell vertices reached by open edges; m(x) is the open degree.
/// Throws InvalidArgument unless the law is Bernoulli, RootIsolated if the
/// origin has no open edge.
PercolationCluster percolation_cluster(const Environment& env);

/// Edge list of environment_graph(env) with #law, #seed and #box headers.
void write_environment(std::ostream& out, const Environment& env);

}  // namespace awlab
