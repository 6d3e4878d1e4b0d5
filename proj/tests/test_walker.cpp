#include <cmath>
#include <numeric>

#include "awlab/error.hpp"
#include "awlab/green.hpp"
#include "awlab/random_env.hpp"
#include "awlab/walker.hpp"
#include "doctest.h"
#include "oracles.hpp"

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

WalkOptions walk(std::size_t trials, std::uint64_t seed, std::uint64_t horizon = 1'000'000) {
  WalkOptions o;
  o.trials = trials;
  o.seed = seed;
  o.horizon = horizon;
  return o;
}

void check_within_4se(const EstimateReport& r, double exact) {
  CHECK(r.se > 0.0);
  CHECK(std::abs(r.mean - exact) <= 4.0 * r.se);
}

double mean_of(const std::vector<double>& xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size()); }

}  // namespace

TEST_CASE("single-vertex region exits in one step") {
  const auto g = lattice_graph(2, 3);
  const auto a = Region::from_vertices(g, {g.root()});
  const auto r = simulate_exit(g, a, walk(1000, 1));
  CHECK(r.mean == 1.0);
  CHECK(r.se == 0.0);
  CHECK(r.trials == 1000);
  CHECK(r.truncated == 0);
  CHECK_FALSE(r.biased());
  CHECK(r.seed == 1);
}

TEST_CASE("segment exit matches gambler's ruin") {
  const auto g = oracle::segment(0, 9, 0);
  const auto r = simulate_exit(g, Region::interior(g), walk(100000, 7));
  check_within_4se(r, 10.0);
  const auto mid = oracle::segment(0, 9, 4);
  check_within_4se(simulate_exit(mid, Region::interior(mid), walk(100000, 8)), oracle::gamblers_ruin(10, 4));
}

TEST_CASE("planar box exit matches the exact value") {
  const auto g = lattice_graph(2, 7);
  const auto a = Region::interior(g);
  const double exact = exit_time_exact(g, green_killed(g, a));
  check_within_4se(simulate_exit(g, a, walk(100000, 3)), exact);

  const auto env = environment_graph(sample_environment(EnvironmentLaw::uniform01(), LatticeBox{2, 7}, 4));
  const auto ball2 = ball(env, 3);
  check_within_4se(simulate_exit(env, ball2, walk(100000, 5)), exit_time_exact(env, green_killed(env, ball2)));
}

TEST_CASE("occupation of the whole interior is the exit time") {
  const auto g = lattice_graph(2, 5);
  const auto a = Region::interior(g);
  const auto exit = simulate_exit(g, a, walk(5000, 12));
  const auto occ = simulate_occupation(g, a, walk(5000, 12));
  CHECK(occ.mean == exit.mean);
  CHECK(occ.se == exit.se);
}

TEST_CASE("occupation of a small ball in a three-dimensional box") {
  const int radius = 12;
  const auto g = lattice_graph(3, radius);
  const auto a = ball(g, 2);
  const auto labels = a.labels(g);
  const std::vector<int> radii{radius};
  const auto exact = occupation_truncated([](int r) { return lattice_graph(3, r); }, labels, radii);
  const auto r = simulate_occupation(g, a, walk(20000, 21, 100000));
  CHECK(r.truncated == 0);
  check_within_4se(r, exact.front().value);

  const auto one = simulate_occupation(g, a, walk(1, 99));
  const auto again = simulate_occupation(g, a, walk(1, 99));
  CHECK(one.mean == again.mean);
  CHECK(one.mean >= 1.0);
  CHECK(one.se == 0.0);
}

TEST_CASE("results do not depend on the thread count") {
  const auto g = environment_graph(sample_environment(EnvironmentLaw::uniform01(), LatticeBox{2, 6}, 8));
  const auto a = ball(g, 4);
  WalkOptions o = walk(3000, 17);
  o.threads = 1;
  const auto exit1 = simulate_exit(g, a, o);
  const auto occ1 = simulate_occupation(g, a, o);
  const auto disp1 = simulate_displacement(g, 200, 300, 17, 1);
  const auto tree1 = simulate_tree_displacement(3, 200, 300, 17, 1);
  for (unsigned threads : {2u, 8u}) {
    o.threads = threads;
    const auto exit = simulate_exit(g, a, o);
    CHECK(exit.mean == exit1.mean);
    CHECK(exit.se == exit1.se);
    const auto occ = simulate_occupation(g, a, o);
    CHECK(occ.mean == occ1.mean);
    CHECK(occ.se == occ1.se);
    CHECK(simulate_displacement(g, 200, 300, 17, threads) == disp1);
    CHECK(simulate_tree_displacement(3, 200, 300, 17, threads) == tree1);
  }
  o.seed = 18;
  CHECK(simulate_exit(g, a, o).mean != exit1.mean);
}

TEST_CASE("truncation policy") {
  const auto g = lattice_graph(2, 10);
  const auto a = Region::interior(g);
  CHECK(throws_code(Errc::ExcessiveTruncation, [&] { simulate_exit(g, a, walk(500, 1, 10)); }));
  WalkOptions lenient = walk(500, 1, 10);
  lenient.max_truncated_fraction = 1.0;
  const auto r = simulate_exit(g, a, lenient);
  CHECK(r.truncated == 500);
  CHECK(r.mean == 10.0);
  CHECK(r.biased());
  CHECK(r.horizon == 10);
  CHECK(throws_code(Errc::InvalidArgument, [&] { simulate_exit(g, a, walk(10, 1, 0)); }));
  CHECK(throws_code(Errc::InvalidArgument, [&] { simulate_exit(g, a, walk(0, 1)); }));
  const auto off_root = Region::from_vertices(g, {g.at(lattice_label(std::vector<int>{1, 0}))});
  CHECK(throws_code(Errc::RootNotInRegion, [&] { simulate_exit(g, off_root, walk(10, 1)); }));
}

TEST_CASE("displacement speed") {
  const auto tree = simulate_tree_displacement(3, 2000, 200, 31);
  REQUIRE(tree.size() == 200);
  const double speed = mean_of(tree);
  CHECK(speed >= 0.28);
  CHECK(speed <= 0.38);

  const auto many = simulate_tree_displacement(3, 300, 20000, 32);
  double var = 0.0;
  const double m = mean_of(many);
  for (double x : many) var += (x - m) * (x - m);
  const double se = std::sqrt(var / static_cast<double>(many.size() - 1) / static_cast<double>(many.size()));
  CHECK(std::abs(m - oracle::tree_speed(3, 300)) <= 4.0 * se);
  CHECK(std::abs(mean_of(simulate_tree_displacement(4, 300, 20000, 33)) - oracle::tree_speed(4, 300)) <= 0.01);

  const auto finite = regular_tree(3, 10);
  CHECK(finite.size() == 1 + 3 * ((std::size_t{1} << 10) - 1));
  CHECK(finite.frame_count() == 3u * (std::size_t{1} << 9));
  // eight steps cannot reach depth 10, so the finite tree looks infinite
  const auto on_tree = simulate_displacement(finite, 8, 20000, 4);
  const double tm = mean_of(on_tree);
  double tv = 0.0;
  for (double x : on_tree) tv += (x - tm) * (x - tm);
  const double tse = std::sqrt(tv / static_cast<double>(on_tree.size() - 1) / static_cast<double>(on_tree.size()));
  CHECK(std::abs(tm - oracle::tree_speed(3, 8)) <= 4.0 * tse);
}

TEST_CASE("lattice displacement is diffusive") {
  const auto g = lattice_graph(2, 60);
  const auto xs = simulate_displacement(g, 2000, 200, 5);
  CHECK(mean_of(xs) <= 0.1);
  const auto zeros = simulate_displacement(g, 0, 50, 5);
  CHECK(zeros == std::vector<double>(50, 0.0));
}

TEST_CASE("step law") {
  const auto g = oracle::random_graph(77, 12, 20, 2);
  for (Vertex x : {g.root(), Vertex{3}}) {
    const std::size_t draws = 1'000'000;
    const auto freq = empirical_step_law(g, x, draws, 5);
    const auto& nbs = g.neighbors(x);
    REQUIRE(freq.size() == nbs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      const double p = nbs[i].weight / g.measure(x);
      const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(draws));
      CHECK(std::abs(freq[i] - p) <= 4.0 * sigma);
      total += freq[i];
    }
    CHECK(total == doctest::Approx(1.0));
  }
}
