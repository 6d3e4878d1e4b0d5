#include "awlab/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "awlab/error.hpp"

namespace awlab {

std::optional<Vertex> WeightedGraph::find(Label l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l) return std::nullopt;
  return static_cast<Vertex>(it - labels_.begin());
}

Vertex WeightedGraph::at(Label l) const {
  auto v = find(l);
  if (!v) throw Error(Errc::InvalidArgument, "unknown vertex label " + std::to_string(l));
  return *v;
}

double WeightedGraph::kernel(Vertex x, Vertex y) const {
  auto nbrs = neighbors(x);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), y,
                             [](const Neighbor& n, Vertex target) { return n.to < target; });
  return (it != nbrs.end() && it->to == y) ? it->weight : 0.0;
}

std::vector<Vertex> WeightedGraph::interior() const {
  std::vector<Vertex> out;
  out.reserve(size() - frame_count_);
  for (Vertex v = 0; v < size(); ++v)
    if (!frame_[v]) out.push_back(v);
  return out;
}

std::vector<Label> WeightedGraph::frame_labels() const {
  std::vector<Label> out;
  for (Vertex v = 0; v < size(); ++v)
    if (frame_[v]) out.push_back(labels_[v]);
  return out;
}

std::vector<EdgeSpec> WeightedGraph::edges() const {
  std::vector<EdgeSpec> out;
  for (Vertex x = 0; x < size(); ++x)
    for (const auto& n : neighbors(x))
      if (n.to >= x) out.push_back({labels_[x], labels_[n.to], n.weight});
  return out;
}

WeightedGraph build_graph(std::span<const EdgeSpec> edges, Label root, std::span<const Label> frame) {
  std::map<std::pair<Label, Label>, double> merged;
  for (const auto& e : edges) {
    if (!(e.weight >= 0.0))
      throw Error(Errc::NegativeWeight,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has weight " + std::to_string(e.weight));
    if (e.weight == 0.0) continue;
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
  }

  std::vector<Label> labels;
  labels.reserve(2 * merged.size());
  for (const auto& [key, w] : merged) {
    labels.push_back(key.first);
    labels.push_back(key.second);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  WeightedGraph g;
  g.labels_ = std::move(labels);
  const std::size_t n = g.labels_.size();
  auto root_index = g.find(root);
  if (!root_index) throw Error(Errc::RootIsolated, "root " + std::to_string(root) + " has zero measure");

  g.frame_.assign(n, 0);
  for (Label f : frame) {
    if (f == root) throw Error(Errc::InvalidArgument, "root cannot be a frame vertex");
    if (auto v = g.find(f)) g.frame_[*v] = 1;
  }
  g.frame_count_ = static_cast<std::size_t>(std::count(g.frame_.begin(), g.frame_.end(), 1));
  g.root_ = *root_index;

  std::vector<std::size_t> degree(n, 0);
  std::vector<std::tuple<Vertex, Vertex, double>> pairs;
  pairs.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    const Vertex a = *g.find(key.first);
    const Vertex b = *g.find(key.second);
    pairs.emplace_back(a, b, w);
    ++degree[a];
    if (a != b) ++degree[b];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [a, b, w] : pairs) {
    g.adjacency_[cursor[a]++] = {b, w};
    if (a != b) g.adjacency_[cursor[b]++] = {a, w};
  }
  g.measure_.assign(n, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    auto begin = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto end = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(begin, end, [](const Neighbor& l, const Neighbor& r) { return l.to < r.to; });
    double m = 0.0;
    for (auto it = begin; it != end; ++it) m += it->weight;
    g.measure_[v] = m;
  }
  return g;
}

// ---------------------------------------------------------------------------

Region Region::from_vertices(const WeightedGraph& g, std::vector<Vertex> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Region r;
  r.mask_.assign(g.size(), 0);
  for (Vertex v : members) {
    if (v >= g.size()) throw Error(Errc::InvalidArgument, "vertex index out of range");
    if (g.is_frame(v))
      throw Error(Errc::InvalidArgument, "frame vertex " + std::to_string(g.label(v)) + " cannot belong to a region");
    r.mask_[v] = 1;
    r.measure_ += g.measure(v);
  }
  r.members_ = std::move(members);
  r.connected_ = is_connected(g, r.members_);
  return r;
}

Region Region::from_labels(const WeightedGraph& g, std::span<const Label> labels) {
  std::vector<Vertex> members;
  members.reserve(labels.size());
  for (Label l : labels) members.push_back(g.at(l));
  return from_vertices(g, std::move(members));
}

Region Region::interior(const WeightedGraph& g) { return from_vertices(g, g.interior()); }

std::vector<Label> Region::labels(const WeightedGraph& g) const {
  std::vector<Label> out;
  out.reserve(members_.size());
  for (Vertex v : members_) out.push_back(g.label(v));
  return out;
}

BoundaryEdges boundary(const WeightedGraph& g, const Region& a) {
  BoundaryEdges out;
  for (Vertex x : a.members())
    for (const auto& n : g.neighbors(x))
      if (!a.contains(n.to)) {
        out.pairs.push_back({x, n.to, n.weight});
        out.total += n.weight;
      }
  return out;
}

double boundary_measure(const WeightedGraph& g, const Region& a) {
  double total = 0.0;
  for (Vertex x : a.members())
    for (const auto& n : g.neighbors(x))
      if (!a.contains(n.to)) total += n.weight;
  return total;
}

bool is_connected(const WeightedGraph& g, std::span<const Vertex> members) {
  if (members.size() <= 1) return true;
  std::vector<char> in(g.size(), 0), seen(g.size(), 0);
  for (Vertex v : members) in[v] = 1;
  std::vector<Vertex> stack{members.front()};
  seen[members.front()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (const auto& n : g.neighbors(x))
      if (in[n.to] && !seen[n.to]) {
        seen[n.to] = 1;
        ++reached;
        stack.push_back(n.to);
      }
  }
  std::size_t distinct = 0;
  for (Vertex v = 0; v < g.size(); ++v) distinct += in[v];
  return reached == distinct;
}

bool is_connected(const WeightedGraph& g, const Region& a) { return is_connected(g, a.members()); }

std::vector<std::int64_t> hop_distances(const WeightedGraph& g, Vertex source, bool stop_at_frame) {
  std::vector<std::int64_t> dist(g.size(), -1);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    if (stop_at_frame && g.is_frame(x) && x != source) continue;
    for (const auto& n : g.neighbors(x))
      if (dist[n.to] < 0) {
        dist[n.to] = dist[x] + 1;
        queue.push_back(n.to);
      }
  }
  return dist;
}

std::optional<std::size_t> hop_distance(const WeightedGraph& g, Vertex x, Vertex y) {
  if (x == y) return 0;
  const auto dist = hop_distances(g, x);
  if (dist[y] < 0) return std::nullopt;
  return static_cast<std::size_t>(dist[y]);
}

Region ball(const WeightedGraph& g, std::size_t radius) {
  const auto dist = hop_distances(g, g.root(), true);
  std::vector<Vertex> members;
  for (Vertex v = 0; v < g.size(); ++v)
    if (!g.is_frame(v) && dist[v] >= 0 && static_cast<std::size_t>(dist[v]) <= radius) members.push_back(v);
  return Region::from_vertices(g, std::move(members));
}

// ---------------------------------------------------------------------------

GraphFile read_edge_list(std::istream& in) {
  GraphFile file;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(Errc::Parse, "line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::istringstream ls(line.substr(first));
    if (line[first] == '#') {
      std::string key;
      ls >> key;
      key.erase(0, 1);
      if (key == "root") {
        Label r;
        if (!(ls >> r)) fail("malformed #root header");
        file.root = r;
      } else if (key == "frame") {
        Label f;
        while (ls >> f) file.frame.push_back(f);
      } else if (!key.empty()) {
        std::string rest;
        std::getline(ls >> std::ws, rest);
        file.metadata[key] = rest;
      }
      continue;
    }
    EdgeSpec e;
    if (!(ls >> e.u >> e.v >> e.weight)) fail("expected 'u v weight'");
    file.edges.push_back(e);
  }
  return file;
}

WeightedGraph to_graph(const GraphFile& file) {
  if (!file.root) throw Error(Errc::Parse, "missing #root header");
  return build_graph(file.edges, *file.root, file.frame);
}

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open graph file " + path);
  return to_graph(read_edge_list(in));
}

void write_edge_list(std::ostream& out, const WeightedGraph& g, const std::map<std::string, std::string>& metadata) {
  for (const auto& [key, value] : metadata) out << '#' << key << ' ' << value << '\n';
  out << "#root " << g.label(g.root()) << '\n';
  const auto frame = g.frame_labels();
  if (!frame.empty()) {
    out << "#frame";
    for (Label f : frame) out << ' ' << f;
    out << '\n';
  }
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << e.u << ' ' << e.v << ' ' << buf << '\n';
  }
}

std::uint64_t region_hash(const WeightedGraph& g, const Region& a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Vertex v : a.members()) {
    auto l = static_cast<std::uint64_t>(g.label(v));
    for (int i = 0; i < 8; ++i) {
      h ^= (l >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace awlab
