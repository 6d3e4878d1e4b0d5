#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace awlab {

/// External vertex name as it appears in edge lists (may be negative).
using Label = std::int64_t;
/// Dense internal index into a WeightedGraph, ordered by ascending label.
using Vertex = std::uint32_t;

struct EdgeSpec {
  Label u = 0;
  Label v = 0;
  double weight = 0.0;
  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct Neighbor {
  Vertex to = 0;
  double weight = 0.0;  // mu(x, to) > 0
};

/// Immutable reversible chain on a weighted graph: symmetric kernel mu,
/// measure m(x) = sum_z mu(x, z), root, and an optional absorbing frame.
///
/// Frame vertices can be stepped into but never belong to a Region; they
/// give every finite region a nonempty boundary.
class WeightedGraph {
 public:
  std::size_t size() const noexcept { return labels_.size(); }
  Vertex root() const noexcept { return root_; }

  Label label(Vertex v) const { return labels_[v]; }
  std::optional<Vertex> find(Label l) const;
  /// Like find() but throws InvalidArgument for unknown labels.
  Vertex at(Label l) const;

  bool is_frame(Vertex v) const { return frame_[v] != 0; }
  double measure(Vertex v) const { return measure_[v]; }
  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  /// mu(x, y); zero when not adjacent.
  double kernel(Vertex x, Vertex y) const;
  /// p(x, y) = mu(x, y) / m(x).
  double transition(Vertex x, Vertex y) const { return kernel(x, y) / measure_[x]; }

  std::size_t frame_count() const noexcept { return frame_count_; }
  std::vector<Vertex> interior() const;
  std::vector<Label> frame_labels() const;
  /// Unordered edges (u <= v by label, self-loops once), sorted by (u, v).
  std::vector<EdgeSpec> edges() const;

 private:
  friend WeightedGraph build_graph(std::span<const EdgeSpec>, Label, std::span<const Label>);

  std::vector<Label> labels_;
  std::vector<char> frame_;
  std::vector<double> measure_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  Vertex root_ = 0;
  std::size_t frame_count_ = 0;
};

/// Merges duplicate pairs by summation, drops zero weights and prunes
/// vertices of zero measure. Throws NegativeWeight or RootIsolated.
WeightedGraph build_graph(std::span<const EdgeSpec> edges, Label root, std::span<const Label> frame = {});

/// Finite set of non-frame vertices with cached measure and connectivity.
class Region {
 public:
  Region() = default;

  static Region from_vertices(const WeightedGraph& g, std::vector<Vertex> members);
  static Region from_labels(const WeightedGraph& g, std::span<const Label> labels);
  /// Every non-frame vertex.
  static Region interior(const WeightedGraph& g);

  const std::vector<Vertex>& members() const noexcept { return members_; }
  bool contains(Vertex v) const { return v < mask_.size() && mask_[v] != 0; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  double measure() const noexcept { return measure_; }
  bool connected() const noexcept { return connected_; }
  std::vector<Label> labels(const WeightedGraph& g) const;

 private:
  std::vector<Vertex> members_;
  std::vector<char> mask_;
  double measure_ = 0.0;
  bool connected_ = true;
};

struct DirectedEdge {
  Vertex from = 0;
  Vertex to = 0;
  double weight = 0.0;
};

struct BoundaryEdges {
  std::vector<DirectedEdge> pairs;  // x in A, y not in A
  double total = 0.0;
};

BoundaryEdges boundary(const WeightedGraph& g, const Region& a);

/// mu(boundary A) without materializing the pair list.
double boundary_measure(const WeightedGraph& g, const Region& a);

/// Connectivity of `members` through positive-weight edges inside the set.
/// The empty set is connected.
bool is_connected(const WeightedGraph& g, std::span<const Vertex> members);
bool is_connected(const WeightedGraph& g, const Region& a);

/// Shortest path length in hops; nullopt when y is unreachable from x.
std::optional<std::size_t> hop_distance(const WeightedGraph& g, Vertex x, Vertex y);
/// BFS distances from `source`; -1 marks unreachable vertices. Frame
/// vertices are reached but not expanded when `stop_at_frame` is set.
std::vector<std::int64_t> hop_distances(const WeightedGraph& g, Vertex source, bool stop_at_frame = false);

/// Non-frame vertices within `radius` hops of the root (paths may not pass
/// through the frame).
Region ball(const WeightedGraph& g, std::size_t radius);

// Edge-list exchange format:
//   #root <label>
//   #frame <label> <label> ...
//   #<key> <value>          (free-form metadata, preserved on read)
//   <u> <v> <weight>
struct GraphFile {
  std::vector<EdgeSpec> edges;
  std::optional<Label> root;
  std::vector<Label> frame;
  std::map<std::string, std::string> metadata;
};

GraphFile read_edge_list(std::istream& in);
WeightedGraph load_graph(const std::string& path);
WeightedGraph to_graph(const GraphFile& file);
void write_edge_list(std::ostream& out, const WeightedGraph& g,
                     const std::map<std::string, std::string>& metadata = {});

/// FNV-1a hash of the sorted member labels; identifies regions in dumps.
std::uint64_t region_hash(const WeightedGraph& g, const Region& a);

}  // namespace awlab
