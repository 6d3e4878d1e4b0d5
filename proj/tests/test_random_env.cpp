#include <algorithm>
#include <cmath>
#include <sstream>

#include "awlab/error.hpp"
#include "awlab/graph.hpp"
#include "awlab/random_env.hpp"
#include "doctest.h"

using namespace awlab;

namespace {

bool throws_code(Errc code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

Label origin(int d) { return lattice_label(std::vector<int>(static_cast<std::size_t>(d), 0)); }

std::size_t cluster_size(const EnvironmentLaw& law, int n, std::uint64_t seed) {
  const auto env = sample_environment(law, LatticeBox{2, n}, seed);
  try {
    return percolation_cluster(env).interior_size;
  } catch (const Error& e) {
    if (e.code() == Errc::RootIsolated) return 1;
    throw;
  }
}

double median_cluster(double p, int n) {
  std::vector<double> sizes;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    sizes.push_back(static_cast<double>(cluster_size(EnvironmentLaw::bernoulli(p), n, seed)));
  std::sort(sizes.begin(), sizes.end());
  return 0.5 * (sizes[9] + sizes[10]);
}

}  // namespace

TEST_CASE("laws") {
  CHECK(EnvironmentLaw::uniform01().all_positive());
  CHECK_FALSE(EnvironmentLaw::bernoulli(0.7).all_positive());
  CHECK(EnvironmentLaw::bernoulli(1.0).draw(0.999) == 1.0);
  CHECK(EnvironmentLaw::bernoulli(0.3).draw(0.29) == 1.0);
  CHECK(EnvironmentLaw::bernoulli(0.3).draw(0.31) == 0.0);
  for (double u : {0.0, 0.25, 0.999999}) {
    const double x = EnvironmentLaw::uniform01().draw(u);
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
  }
  const auto q = EnvironmentLaw::parse("quantile:0.5@0.1,0.5@1");
  CHECK(q.kind() == EnvironmentLaw::Kind::Quantile);
  CHECK(q.draw(0.2) == 0.1);
  CHECK(q.draw(0.7) == 1.0);
  CHECK(q.all_positive());
  CHECK_FALSE(EnvironmentLaw::parse("quantile:0.5@0,0.5@1").all_positive());
  CHECK(EnvironmentLaw::parse("bernoulli:0.7").p() == 0.7);
  CHECK(EnvironmentLaw::parse("uniform01").kind() == EnvironmentLaw::Kind::Uniform01);
  CHECK(EnvironmentLaw::parse(EnvironmentLaw::parse("quantile:0.25@0.5,0.75@1").describe()).draw(0.3) == 1.0);
  CHECK(throws_code(Errc::InvalidArgument, [] { EnvironmentLaw::bernoulli(1.5); }));
  CHECK(throws_code(Errc::InvalidArgument, [] { EnvironmentLaw::quantile({{0.5, 0.1}, {0.4, 1.0}}); }));
  CHECK(throws_code(Errc::InvalidArgument, [] { EnvironmentLaw::quantile({{0.5, 0.1}, {0.5, 2.0}}); }));
  CHECK(throws_code(Errc::Parse, [] { EnvironmentLaw::parse("gaussian"); }));
}

TEST_CASE("lattice labels and boxes") {
  for (const std::vector<int>& c : {std::vector<int>{0, 0}, {-4096, 4096}, {3, -7}, {1, 2, 3}, {-1, 0, 5, 9}}) {
    CHECK(lattice_coords(lattice_label(c), static_cast<int>(c.size())) == c);
  }
  CHECK(lattice_label(std::vector<int>{1, 0}) != lattice_label(std::vector<int>{0, 1}));
  const LatticeBox box = LatticeBox::from_side(2, 41);
  CHECK(box.n == 20);
  CHECK(box.interior_count() == 41u * 41u);
  CHECK(throws_code(Errc::InvalidArgument, [] { LatticeBox::from_side(2, 40); }));
  // 2 * 41 * 40 inner edges plus 4 * 41 frame edges
  CHECK(lattice_edges(box).size() == 2u * 41 * 40 + 4u * 41);
  CHECK(lattice_frame(box).size() == 4u * 41);
  CHECK(lattice_frame(LatticeBox{3, 0}).size() == 6u);
  const auto g = lattice_graph(3, 4);
  CHECK(g.size() == 9u * 9 * 9 + 6u * 81);
  CHECK(g.measure(g.root()) == 6.0);
  CHECK(g.label(g.root()) == origin(3));
}

TEST_CASE("environment sampling") {
  const LatticeBox box{2, 20};
  const auto ones = sample_environment(EnvironmentLaw::bernoulli(1.0), box, 9);
  CHECK(std::all_of(ones.edges.begin(), ones.edges.end(), [](const EdgeSpec& e) { return e.weight == 1.0; }));

  const auto a = sample_environment(EnvironmentLaw::uniform01(), box, 42);
  const auto b = sample_environment(EnvironmentLaw::uniform01(), box, 42);
  CHECK(a.edges == b.edges);
  const auto skeleton = lattice_edges(box);
  REQUIRE(a.edges.size() == skeleton.size());
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    CHECK(a.edges[i].u == skeleton[i].u);
    CHECK(a.edges[i].v == skeleton[i].v);
  }
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto c = sample_environment(EnvironmentLaw::uniform01(), box, 1000 + k);
    const auto d = sample_environment(EnvironmentLaw::uniform01(), box, 2000 + k);
    CHECK(c.edges != d.edges);
  }
  double sum = 0.0;
  for (const auto& e : a.edges) sum += e.weight;
  const double mean = sum / static_cast<double>(a.edges.size());
  CHECK(mean >= 0.45);
  CHECK(mean <= 0.55);
  CHECK(a.edges.size() > 3300);

  for (unsigned threads : {1u, 3u, 8u})
    CHECK(sample_environment(EnvironmentLaw::uniform01(), box, 42, threads).edges == a.edges);
}

TEST_CASE("environments extend to larger boxes") {
  const auto small = sample_environment(EnvironmentLaw::uniform01(), LatticeBox{3, 3}, 5);
  const auto large = sample_environment(EnvironmentLaw::uniform01(), LatticeBox{3, 6}, 5);
  for (const auto& e : small.edges) CHECK(large.conductance(e.u, e.v) == e.weight);
  CHECK(small.conductance(small.edges[7].v, small.edges[7].u) == small.edges[7].weight);
  CHECK(throws_code(Errc::InvalidArgument, [&] { small.conductance(origin(3), origin(3)); }));
}

TEST_CASE("environment graphs") {
  const auto ones = environment_graph(sample_environment(EnvironmentLaw::bernoulli(1.0), LatticeBox{2, 6}, 1));
  for (Vertex v : ones.interior()) CHECK(ones.measure(v) == 4.0);
  CHECK(ones.frame_count() == 4u * 13);

  const auto env = sample_environment(EnvironmentLaw::uniform01(), LatticeBox{2, 8}, 3);
  const auto g = environment_graph(env);
  const Label o = origin(2);
  double at_origin = 0.0;
  for (int axis = 0; axis < 2; ++axis)
    for (int sign : {-1, 1}) {
      std::vector<int> c{0, 0};
      c[static_cast<std::size_t>(axis)] = sign;
      at_origin += env.conductance(o, lattice_label(c));
    }
  CHECK(g.measure(g.root()) == doctest::Approx(at_origin).epsilon(1e-15));
  CHECK(g.label(g.root()) == o);

  double total_measure = 0.0, total_conductance = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) total_measure += g.measure(v);
  for (const auto& e : env.edges) total_conductance += e.weight;
  CHECK(total_measure == doctest::Approx(2.0 * total_conductance).epsilon(1e-12));
  for (Vertex v : g.interior())
    for (const auto& nb : g.neighbors(v)) CHECK(nb.weight == env.conductance(g.label(v), g.label(nb.to)));

  // a law with zeros drops the closed edges
  const auto half = sample_environment(EnvironmentLaw::parse("quantile:0.5@0,0.5@1"), LatticeBox{2, 8}, 3);
  const auto open_edges = std::count_if(half.edges.begin(), half.edges.end(), [](const EdgeSpec& e) { return e.weight > 0; });
  try {
    const auto hg = environment_graph(half);
    CHECK(hg.edges().size() == static_cast<std::size_t>(open_edges));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RootIsolated);
  }

  Environment closed = env;
  for (auto& e : closed.edges)
    if (e.u == o || e.v == o) e.weight = 0.0;
  CHECK(throws_code(Errc::RootIsolated, [&] { environment_graph(closed); }));
}

TEST_CASE("environment dumps reload") {
  const auto env = sample_environment(EnvironmentLaw::uniform01(), LatticeBox{2, 5}, 17);
  std::stringstream io;
  write_environment(io, env);
  const auto file = read_edge_list(io);
  CHECK(file.metadata.at("seed") == "17");
  CHECK(file.metadata.count("law") == 1);
  CHECK(file.metadata.count("box") == 1);
  const auto a = environment_graph(env);
  const auto b = to_graph(file);
  CHECK(a.size() == b.size());
  CHECK(a.label(a.root()) == b.label(b.root()));
  CHECK(a.frame_labels() == b.frame_labels());
  CHECK(a.edges() == b.edges());
}

TEST_CASE("percolation clusters") {
  const auto full = percolation_cluster(sample_environment(EnvironmentLaw::bernoulli(1.0), LatticeBox{2, 7}, 1));
  CHECK(full.interior_size == 15u * 15u);
  CHECK(full.touches_shell);
  CHECK(full.graph.frame_count() == 4u * 15);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto env = sample_environment(EnvironmentLaw::bernoulli(0.7), LatticeBox{2, 15}, seed);
    try {
      const auto c = percolation_cluster(env);
      const auto interior = c.graph.interior();
      CHECK(is_connected(c.graph, interior));
      CHECK(std::count(interior.begin(), interior.end(), c.graph.root()) == 1);
      CHECK(c.interior_size == interior.size());
      CHECK(c.touches_shell == (c.graph.frame_count() > 0));
      for (Vertex v : interior) {
        double open = 0.0;
        for (const auto& nb : c.graph.neighbors(v)) open += nb.weight;
        CHECK(c.graph.measure(v) == open);
        for (const auto& nb : c.graph.neighbors(v)) CHECK(nb.weight == 1.0);
      }
    } catch (const Error& e) {
      CHECK(e.code() == Errc::RootIsolated);
    }
  }
  CHECK(throws_code(Errc::InvalidArgument,
                    [] { percolation_cluster(sample_environment(EnvironmentLaw::uniform01(), LatticeBox{2, 3}, 1)); }));
}

TEST_CASE("percolation cluster sizes") {
  const double m10 = median_cluster(0.7, 10), m20 = median_cluster(0.7, 20), m30 = median_cluster(0.7, 30);
  CHECK(m10 < m20);
  CHECK(m20 < m30);
  CHECK(median_cluster(0.2, 30) < 50.0);
}
