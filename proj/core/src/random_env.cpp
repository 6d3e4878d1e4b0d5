#include "awlab/random_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

#include "awlab/error.hpp"
#include "awlab/parallel.hpp"
#include "awlab/rng.hpp"

namespace awlab {
namespace {

constexpr Label kBase = 2 * kLatticeOffset + 1;

Label axis_stride(int axis) {
  Label s = 1;
  for (int i = 0; i < axis; ++i) s *= kBase;
  return s;
}

int axis_of(Label u, Label v) {
  const Label diff = v - u;
  for (int axis = 0; axis < kMaxLatticeDimension; ++axis)
    if (diff == axis_stride(axis)) return axis;
  throw Error(Errc::InvalidArgument, "labels are not lattice neighbours");
}

void check_box(const LatticeBox& box) {
  if (box.d < 1 || box.d > kMaxLatticeDimension)
    throw Error(Errc::InvalidArgument, "lattice dimension must be between 1 and 4");
  if (box.n < 0 || box.n + 1 >= kLatticeOffset) throw Error(Errc::InvalidArgument, "lattice box size out of range");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

EnvironmentLaw EnvironmentLaw::uniform01() { return {}; }

EnvironmentLaw EnvironmentLaw::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "Bernoulli parameter must lie in [0, 1]");
  EnvironmentLaw law;
  law.kind_ = Kind::Bernoulli;
  law.p_ = p;
  return law;
}

EnvironmentLaw EnvironmentLaw::quantile(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw Error(Errc::InvalidArgument, "quantile law needs at least one atom");
  double total = 0.0;
  for (const auto& [prob, value] : atoms) {
    if (!(prob >= 0.0)) throw Error(Errc::InvalidArgument, "quantile probabilities must be nonnegative");
    if (!(value >= 0.0 && value <= 1.0)) throw Error(Errc::InvalidArgument, "conductance values must lie in [0, 1]");
    total += prob;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::InvalidArgument, "quantile probabilities must sum to 1");
  EnvironmentLaw law;
  law.kind_ = Kind::Quantile;
  law.atoms_ = std::move(atoms);
  return law;
}

EnvironmentLaw EnvironmentLaw::parse(const std::string& text) {
  try {
    if (text == "uniform01" || text == "uniform") return uniform01();
    if (text.rfind("bernoulli:", 0) == 0) return bernoulli(std::stod(text.substr(10)));
    if (text.rfind("quantile:", 0) == 0) {
      std::vector<std::pair<double, double>> atoms;
      std::stringstream ss(text.substr(9));
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto at = item.find('@');
        if (at == std::string::npos) throw Error(Errc::Parse, "quantile atom must look like prob@value");
        atoms.emplace_back(std::stod(item.substr(0, at)), std::stod(item.substr(at + 1)));
      }
      return quantile(std::move(atoms));
    }
  } catch (const std::logic_error&) {
    throw Error(Errc::Parse, "malformed environment law: " + text);
  }
  throw Error(Errc::Parse, "unknown environment law: " + text);
}

double EnvironmentLaw::draw(double u) const {
  switch (kind_) {
    case Kind::Uniform01: return 1.0 - u;
    case Kind::Bernoulli: return u < p_ ? 1.0 : 0.0;
    case Kind::Quantile: {
      double acc = 0.0;
      for (const auto& [prob, value] : atoms_) {
        acc += prob;
        if (u < acc) return value;
      }
      return atoms_.back().second;
    }
  }
  return 0.0;
}

bool EnvironmentLaw::all_positive() const noexcept {
  switch (kind_) {
    case Kind::Uniform01: return true;
    case Kind::Bernoulli: return false;
    case Kind::Quantile:
      return std::none_of(atoms_.begin(), atoms_.end(), [](const auto& a) { return a.first > 0.0 && a.second == 0.0; });
  }
  return false;
}

std::string EnvironmentLaw::describe() const {
  switch (kind_) {
    case Kind::Uniform01: return "uniform01";
    case Kind::Bernoulli: return "bernoulli:" + format_double(p_);
    case Kind::Quantile: {
      std::string out = "quantile:";
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) out += ',';
        out += format_double(atoms_[i].first) + "@" + format_double(atoms_[i].second);
      }
      return out;
    }
  }
  return "unknown";
}

LatticeBox LatticeBox::from_side(int d, int side) {
  if (side < 1 || side % 2 == 0) throw Error(Errc::InvalidArgument, "box side must be a positive odd number");
  LatticeBox box{d, (side - 1) / 2};
  check_box(box);
  return box;
}

std::size_t LatticeBox::interior_count() const {
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(side());
  return count;
}

Label lattice_label(std::span<const int> coords) {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxLatticeDimension))
    throw Error(Errc::InvalidArgument, "lattice dimension must be between 1 and 4");
  Label label = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    if (std::abs(coords[i]) > kLatticeOffset) throw Error(Errc::InvalidArgument, "lattice coordinate out of range");
    label = label * kBase + (coords[i] + kLatticeOffset);
  }
  return label;
}

std::vector<int> lattice_coords(Label label, int d) {
  std::vector<int> coords(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    coords[static_cast<std::size_t>(i)] = static_cast<int>(label % kBase) - kLatticeOffset;
    label /= kBase;
  }
  return coords;
}

std::vector<EdgeSpec> lattice_edges(const LatticeBox& box) {
  check_box(box);
  std::vector<EdgeSpec> edges;
  edges.reserve(box.interior_count() * static_cast<std::size_t>(box.d) + 2 * box.interior_count() / box.side());
  std::vector<int> c(static_cast<std::size_t>(box.d), -box.n);
  for (;;) {
    const Label x = lattice_label(c);
    for (int axis = 0; axis < box.d; ++axis) {
      const Label stride = axis_stride(axis);
      edges.push_back({x, x + stride, 1.0});  // reaches the frame when c[axis] == n
      if (c[static_cast<std::size_t>(axis)] == -box.n) edges.push_back({x - stride, x, 1.0});
    }
    std::size_t i = 0;
    while (i < c.size() && c[i] == box.n) c[i++] = -box.n;
    if (i == c.size()) break;
    ++c[i];
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return edges;
}

std::vector<Label> lattice_frame(const LatticeBox& box) {
  check_box(box);
  std::vector<Label> frame;
  std::vector<int> c(static_cast<std::size_t>(box.d), -box.n);
  for (;;) {
    for (int axis = 0; axis < box.d; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      auto shell = c;
      if (c[a] == box.n) {
        shell[a] = box.n + 1;
        frame.push_back(lattice_label(shell));
      }
      if (c[a] == -box.n) {
        shell[a] = -box.n - 1;
        frame.push_back(lattice_label(shell));
      }
    }
    std::size_t i = 0;
    while (i < c.size() && c[i] == box.n) c[i++] = -box.n;
    if (i == c.size()) break;
    ++c[i];
  }
  std::sort(frame.begin(), frame.end());
  frame.erase(std::unique(frame.begin(), frame.end()), frame.end());
  return frame;
}

double Environment::conductance(Label a, Label b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                             [](const EdgeSpec& e, const std::pair<Label, Label>& key) {
                               return e.u != key.first ? e.u < key.first : e.v < key.second;
                             });
  if (it == edges.end() || it->u != a || it->v != b) throw Error(Errc::InvalidArgument, "edge is not in the box");
  return it->weight;
}

Environment sample_environment(const EnvironmentLaw& law, const LatticeBox& box, std::uint64_t seed,
                               unsigned threads) {
  Environment env{box, law, seed, lattice_edges(box)};
  parallel_for(env.edges.size(), threads, [&](std::size_t i) {
    auto& e = env.edges[i];
    const auto axis = static_cast<std::uint64_t>(axis_of(e.u, e.v));
    e.weight = law.draw(to_unit(keyed_hash(seed, static_cast<std::uint64_t>(e.u), axis)));
  });
  return env;
}

WeightedGraph environment_graph(const Environment& env) {
  const auto frame = lattice_frame(env.box);
  const std::vector<int> origin(static_cast<std::size_t>(env.box.d), 0);
  return build_graph(env.edges, lattice_label(origin), frame);
}

WeightedGraph lattice_graph(int d, int n) {
  const LatticeBox box{d, n};
  const auto edges = lattice_edges(box);
  const auto frame = lattice_frame(box);
  const std::vector<int> origin(static_cast<std::size_t>(d), 0);
  return build_graph(edges, lattice_label(origin), frame);
}

PercolationCluster percolation_cluster(const Environment& env) {
  if (env.law.kind() != EnvironmentLaw::Kind::Bernoulli)
    throw Error(Errc::InvalidArgument, "percolation needs a Bernoulli environment");
  const auto frame = lattice_frame(env.box);
  auto in_frame = [&](Label l) { return std::binary_search(frame.begin(), frame.end(), l); };

  std::map<Label, std::vector<Label>> open;
  for (const auto& e : env.edges) {
    if (e.weight <= 0.0) continue;
    open[e.u].push_back(e.v);
    open[e.v].push_back(e.u);
  }
  const std::vector<int> origin_coords(static_cast<std::size_t>(env.box.d), 0);
  const Label origin = lattice_label(origin_coords);
  if (!open.count(origin)) throw Error(Errc::RootIsolated, "origin has no open edge");

  std::vector<Label> cluster{origin};
  std::map<Label, char> seen{{origin, 1}};
  std::queue<Label> queue;
  queue.push(origin);
  while (!queue.empty()) {
    const Label x = queue.front();
    queue.pop();
    for (Label y : open[x]) {
      if (seen.count(y) || in_frame(y)) continue;
      seen[y] = 1;
      cluster.push_back(y);
      queue.push(y);
    }
  }
  std::sort(cluster.begin(), cluster.end());

  PercolationCluster out;
  std::vector<EdgeSpec> edges;
  std::vector<Label> reached_frame;
  for (const auto& e : env.edges) {
    if (e.weight <= 0.0) continue;
    const bool u_in = std::binary_search(cluster.begin(), cluster.end(), e.u);
    const bool v_in = std::binary_search(cluster.begin(), cluster.end(), e.v);
    if (!u_in && !v_in) continue;
    edges.push_back({e.u, e.v, 1.0});
    if (!u_in) reached_frame.push_back(e.u);
    if (!v_in) reached_frame.push_back(e.v);
  }
  out.touches_shell = !reached_frame.empty();
  out.interior_size = cluster.size();
  out.graph = build_graph(edges, origin, reached_frame);
  return out;
}

void write_environment(std::ostream& out, const Environment& env) {
  const std::map<std::string, std::string> metadata{
      {"law", env.law.describe()},
      {"seed", std::to_string(env.seed)},
      {"box", "d=" + std::to_string(env.box.d) + ",n=" + std::to_string(env.box.n)},
  };
  write_edge_list(out, environment_graph(env), metadata);
}

}  // namespace awlab
