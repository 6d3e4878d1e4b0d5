#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "awlab/graph.hpp"
#include "awlab/profile_function.hpp"
#include "awlab/random_env.hpp"

namespace awlab::cli {

struct GraphSource {
  enum class Kind { None, File, Lattice, Environment, Percolation };  // None: no graph (tree walks)
  Kind kind = Kind::Lattice;
  std::string path;  // File
  int d = 2;
  int n = 4;
  std::string law = "uniform01";  // Environment; Percolation uses bernoulli:p
};

struct RegionSpec {
  enum class Kind { Full, Balls, List };
  Kind kind = Kind::Full;
  int r_min = 0, r_max = 0;
  std::vector<Label> labels;
};

struct ExperimentConfig {
  std::string scenario;
  GraphSource graph;
  RegionSpec region;
  std::string f_spec;  // empty: power:d on lattices, id on graph files
  bool floor_at_root = true;
  double tol = 1e-10;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  unsigned threads = 0;
  // Monte Carlo and sampling budgets
  std::size_t trials = 10000;
  std::uint64_t horizon = 1'000'000;
  std::size_t samples = 1000;
  std::size_t max_vertices = 8;
  // scaling and transience sweeps
  std::string quantity = "exit";  // exit | occupation
  std::vector<int> radii;
  double box_factor = 4.0;
  std::size_t seeds = 1;  // environments: seed, seed + 1, ...
  // isoperimetry
  std::string method = "levelset";  // exhaustive | levelset | sampled | betac
  std::string growth = "weighted";  // weighted | uniform
  double beta0 = 0.0;
  double n0 = 0.0;
  double max_measure = 0.0;
  // simulate
  std::string mode = "exit";  // exit | occupation | displacement | tree
  std::uint64_t steps = 1000;
  int q = 3;
};

/// "d=2,n=12" or "d=3,side=25".
GraphSource parse_lattice(const std::string& text);
/// "full", "ball:3", "ball:1..10", "list:0,1,2".
RegionSpec parse_region(const std::string& text);
/// "power:2", "id", "custom:1@1,10@4"; floor applied separately.
ProfileFunction parse_profile(const std::string& text, double floor = 0.0);
/// "6,8,10" or "2..10".
std::vector<int> parse_int_list(const std::string& text);

/// F named by the config with the given floor.
ProfileFunction resolve_profile(const ExperimentConfig& config, double floor);
std::string resolved_f_spec(const ExperimentConfig& config);

/// Throws Error(InvalidArgument) for a missing file, a missing seed on a
/// randomized source, or inconsistent parameters.
void validate(const ExperimentConfig& config);

/// Graph described by the config at lattice half-width n (file sources ignore n).
WeightedGraph build_graph(const ExperimentConfig& config, int n);
WeightedGraph build_graph(const ExperimentConfig& config);

std::string describe(const GraphSource& source);
std::string describe(const RegionSpec& region);

nlohmann::json to_json(const ExperimentConfig& config);
/// INI text accepted back by --config.
std::string to_ini(const ExperimentConfig& config, const std::string& subcommand);

}  // namespace awlab::cli
