#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "awlab/bounds.hpp"
#include "awlab/cli/commands.hpp"
#include "awlab/error.hpp"
#include "awlab/green.hpp"
#include "awlab/isoperimetry.hpp"
#include "awlab/level_profile.hpp"
#include "awlab/walker.hpp"

namespace awlab::cli {
namespace {

struct RawOptions {
  std::string graph, lattice, env, percolation, region = "full", radii;
  std::optional<std::uint64_t> seed;
};

// Options shared by every subcommand, so that one INI file with a section per
// subcommand can drive any of them.
void add_options(CLI::App* sub, ExperimentConfig& c, RawOptions& raw) {
  sub->add_option("--graph", raw.graph, "edge-list file");
  sub->add_option("--lattice", raw.lattice, "Z^d box, e.g. d=2,n=12 or d=3,side=25");
  sub->add_option("--env", raw.env, "conductance law on the lattice: uniform01 | bernoulli:p | quantile:p@v,...");
  sub->add_option("--percolation", raw.percolation, "open-edge probability; uses the origin's cluster");
  sub->add_option("--region", raw.region, "full | ball:r | ball:r1..r2 | list:a,b,c");
  sub->add_option("--F", c.f_spec, "power:d | id | custom:x@F,...");
  sub->add_flag("!--no-floor", c.floor_at_root, "do not floor F at m(o)");
  sub->add_option("--seed", raw.seed, "seed for every randomized step");
  sub->add_option("--tol", c.tol, "Green solver residual tolerance");
  sub->add_option("--out", c.out_dir, "output directory");
  sub->add_option("--threads", c.threads, "worker threads (default AWLAB_THREADS or all cores)");
  sub->add_option("--scenario", c.scenario, "name recorded in the report");
  sub->add_option("--trials", c.trials);
  sub->add_option("--horizon", c.horizon);
  sub->add_option("--samples", c.samples);
  sub->add_option("--max-vertices", c.max_vertices);
  sub->add_option("--max-measure", c.max_measure);
  sub->add_option("--quantity", c.quantity, "exit | occupation");
  sub->add_option("--radii", raw.radii, "e.g. 2..10 or 6,8,10");
  sub->add_option("--box-factor", c.box_factor, "occupation box half-width per unit ball radius");
  sub->add_option("--seeds", c.seeds, "number of environment seeds (seed, seed+1, ...)");
  sub->add_option("--method", c.method, "exhaustive | levelset | sampled | betac");
  sub->add_option("--growth", c.growth, "weighted | uniform");
  sub->add_option("--beta0", c.beta0);
  sub->add_option("--n0", c.n0);
  sub->add_option("--mode", c.mode, "exit | occupation | displacement | tree");
  sub->add_option("--steps", c.steps);
  sub->add_option("--q", c.q, "tree degree");
}

void resolve(ExperimentConfig& c, const RawOptions& raw) {
  c.seed = raw.seed;
  if (!raw.graph.empty()) {
    c.graph.kind = GraphSource::Kind::File;
    c.graph.path = raw.graph;
  } else if (!raw.lattice.empty()) {
    c.graph = parse_lattice(raw.lattice);
    if (!raw.env.empty() && !raw.percolation.empty())
      throw Error(Errc::InvalidArgument, "--env and --percolation are exclusive");
    if (!raw.env.empty()) {
      c.graph.kind = GraphSource::Kind::Environment;
      c.graph.law = raw.env;
    } else if (!raw.percolation.empty()) {
      c.graph.kind = GraphSource::Kind::Percolation;
      c.graph.law = "bernoulli:" + raw.percolation;
    }
  } else if (c.mode == "tree") {
    c.graph.kind = GraphSource::Kind::None;
  } else {
    throw Error(Errc::InvalidArgument, "need --graph or --lattice");
  }
  c.region = parse_region(raw.region);
  if (!raw.radii.empty()) c.radii = parse_int_list(raw.radii);
  validate(c);
}

void require_seed(const ExperimentConfig& c) {
  if (!c.seed) throw Error(Errc::InvalidArgument, "this command needs --seed");
}

// Writes report.json (with the resolved config), config.ini and the CSV table
// into --out, or prints the JSON when no directory is given.
void emit(const ExperimentConfig& c, const std::string& command, nlohmann::json body, const std::string& csv_name,
          const std::string& csv) {
  body["command"] = command;
  body["config"] = to_json(c);
  if (c.out_dir.empty()) {
    std::cout << body.dump(2) << "\n";
    return;
  }
  std::filesystem::create_directories(c.out_dir);
  const std::filesystem::path dir(c.out_dir);
  std::ofstream(dir / "report.json") << body.dump(2) << "\n";
  std::ofstream(dir / "config.ini") << to_ini(c, command);
  if (!csv_name.empty()) std::ofstream(dir / csv_name) << csv;
  std::cout << command << ": wrote " << (dir / "report.json").string() << "\n";
}

int cmd_verify(const ExperimentConfig& c) {
  const auto report = run_verify_bounds(c);
  emit(c, "verify-bounds", to_json(report), "rows.csv", to_csv(report));
  return report.ok ? 0 : 1;
}

int cmd_scaling(const ExperimentConfig& c) {
  const auto report = run_scaling(c);
  emit(c, "scaling", to_json(report), "points.csv", to_csv(report));
  return 0;
}

int cmd_transience(const ExperimentConfig& c) {
  const auto report = run_transience(c);
  emit(c, "transience", to_json(report), "occupation.csv", to_csv(report));
  return 0;
}

int cmd_green(const ExperimentConfig& c) {
  const WeightedGraph g = build_graph(c);
  Region a;
  switch (c.region.kind) {
    case RegionSpec::Kind::Full: a = Region::interior(g); break;
    case RegionSpec::Kind::Balls: a = ball(g, static_cast<std::size_t>(c.region.r_max)); break;
    case RegionSpec::Kind::List: a = Region::from_labels(g, c.region.labels); break;
  }
  const GreenField gf = green_killed(g, a, GreenOptions{c.tol});
  const LevelProfile lp = profile_u(g, gf);
  const auto audit = audit_level_sets(g, gf);
  const auto integrals = integral_u(lp);
  nlohmann::json body{{"size", a.size()},
                      {"measure", a.measure()},
                      {"green_at_root", gf.at_root()},
                      {"exit_time", exit_time_exact(g, gf)},
                      {"residual", gf.residual()},
                      {"harmonic_residual", harmonic_residual(g, gf)},
                      {"solver", gf.solver() == SolverKind::Direct ? "direct" : "cg"},
                      {"integral_u", integrals.integral},
                      {"integral_u_closed_form", integrals.closed_form},
                      {"level_sets", audit.level_sets},
                      {"level_sets_ok", audit.ok()}};
  std::ostringstream green_csv;
  write_green_csv(green_csv, g, gf);
  emit(c, "green", body, "green.csv", green_csv.str());
  if (!c.out_dir.empty()) {
    std::ofstream profile(std::filesystem::path(c.out_dir) / "profile.csv");
    write_profile_csv(profile, lp);
  }
  return audit.ok() ? 0 : 1;
}

int cmd_gen_env(const ExperimentConfig& c) {
  require_seed(c);
  if (c.graph.kind != GraphSource::Kind::Environment && c.graph.kind != GraphSource::Kind::Percolation)
    throw Error(Errc::InvalidArgument, "gen-env needs --lattice with --env or --percolation");
  const Environment env =
      sample_environment(EnvironmentLaw::parse(c.graph.law), LatticeBox{c.graph.d, c.graph.n}, *c.seed, c.threads);
  std::ostringstream text;
  nlohmann::json body{{"law", env.law.describe()}, {"seed", env.seed}, {"edges", env.edges.size()}};
  if (c.graph.kind == GraphSource::Kind::Percolation) {
    const auto cluster = percolation_cluster(env);
    write_edge_list(text, cluster.graph,
                    {{"law", env.law.describe()}, {"seed", std::to_string(env.seed)}, {"cluster", "origin"}});
    body["cluster_size"] = cluster.interior_size;
    body["touches_shell"] = cluster.touches_shell;
  } else {
    write_environment(text, env);
  }
  emit(c, "gen-env", body, "environment.txt", text.str());
  return 0;
}

nlohmann::json iso_json(const IsoReport& r) {
  return {{"method", to_string(r.method)},  {"constant", r.constant},   {"witness", r.witness},
          {"witness_measure", r.witness_measure}, {"witness_boundary", r.witness_boundary},
          {"examined", r.examined},         {"min_size", r.min_size},   {"max_size", r.max_size},
          {"min_measure", r.min_measure},   {"max_measure", r.max_measure},
          {"samples", r.samples},           {"seed", r.seed}};
}

int cmd_isoperimetry(const ExperimentConfig& c) {
  const WeightedGraph g = build_graph(c);
  const ProfileFunction f = resolve_profile(c, c.floor_at_root ? g.measure(g.root()) : 0.0);
  const Growth growth = c.growth == "uniform" ? Growth::Uniform : Growth::Weighted;
  if (c.method == "exhaustive") {
    emit(c, "isoperimetry", iso_json(cis_exhaustive(g, f, c.max_vertices, 10'000'000, c.threads)), "", "");
  } else if (c.method == "levelset") {
    const GreenField gf = green_killed(g, Region::interior(g), GreenOptions{c.tol});
    emit(c, "isoperimetry", iso_json(cis_levelsets(g, gf, f)), "", "");
  } else if (c.method == "sampled") {
    SamplingOptions opts{c.samples, c.max_measure, c.max_vertices, *c.seed, growth, c.threads};
    emit(c, "isoperimetry", iso_json(cis_sampled(g, f, opts)), "", "");
  } else {
    if (!(c.n0 > 0.0)) throw Error(Errc::InvalidArgument, "betac needs --n0");
    BetacOptions opts;
    opts.samples = c.samples;
    opts.max_measure = c.max_measure;
    opts.seed = *c.seed;
    opts.growth = growth;
    opts.threads = c.threads;
    const auto r = verify_betac(g, c.graph.d, c.beta0, c.n0, opts);
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations)
      violations.push_back({{"sample", v.sample}, {"size", v.size}, {"measure", v.measure}, {"boundary", v.boundary},
                            {"ratio", v.ratio}});
    nlohmann::json body{{"samples", r.samples},
                        {"seed", r.seed},
                        {"large_sets", r.large_sets},
                        {"violation_count", r.violation_count},
                        {"violations", violations},
                        {"min_ratio", std::isfinite(r.min_ratio) ? nlohmann::json(r.min_ratio) : nlohmann::json(nullptr)},
                        {"small_set_min_boundary", std::isfinite(r.small_set_min_boundary)
                                                       ? nlohmann::json(r.small_set_min_boundary)
                                                       : nlohmann::json(nullptr)}};
    emit(c, "isoperimetry", body, "", "");
    return r.violation_count == 0 ? 0 : 1;
  }
  return 0;
}

int cmd_simulate(const ExperimentConfig& c) {
  require_seed(c);
  if (c.mode == "tree") {
    const auto samples = simulate_tree_displacement(c.q, c.steps, c.trials, *c.seed, c.threads);
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    emit(c, "simulate", {{"mode", c.mode}, {"mean", mean}, {"trials", c.trials}, {"steps", c.steps}}, "", "");
    return 0;
  }
  const WeightedGraph g = build_graph(c);
  if (c.mode == "displacement") {
    const auto samples = simulate_displacement(g, c.steps, c.trials, *c.seed, c.threads);
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    emit(c, "simulate", {{"mode", c.mode}, {"mean", mean}, {"trials", c.trials}, {"steps", c.steps}}, "", "");
    return 0;
  }
  Region a;
  switch (c.region.kind) {
    case RegionSpec::Kind::Full: a = Region::interior(g); break;
    case RegionSpec::Kind::Balls: a = ball(g, static_cast<std::size_t>(c.region.r_max)); break;
    case RegionSpec::Kind::List: a = Region::from_labels(g, c.region.labels); break;
  }
  WalkOptions opts;
  opts.trials = c.trials;
  opts.horizon = c.horizon;
  opts.seed = *c.seed;
  opts.threads = c.threads;
  const EstimateReport r = c.mode == "exit" ? simulate_exit(g, a, opts) : simulate_occupation(g, a, opts);
  emit(c, "simulate",
       {{"mode", c.mode},
        {"mean", r.mean},
        {"se", r.se},
        {"trials", r.trials},
        {"truncated", r.truncated},
        {"horizon", r.horizon},
        {"seed", r.seed}},
       "", "");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"awlab: Green fields, level-set profiles and exit-time bounds for reversible walks"};
  app.set_config("--config", "", "INI/TOML file with one section per subcommand");
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const ExperimentConfig&);
  };
  const Command commands[] = {
      {"gen-env", "sample a conductance environment or percolation cluster", cmd_gen_env},
      {"green", "solve the killed Green field and its level-set profile", cmd_green},
      {"verify-bounds", "run the bound chain over a region sweep", cmd_verify},
      {"scaling", "log-log fit of exit or occupation time against m(A)", cmd_scaling},
      {"transience", "occupation over growing boxes and the summability verdict", cmd_transience},
      {"isoperimetry", "anchored isoperimetric constants", cmd_isoperimetry},
      {"simulate", "Monte Carlo exit, occupation or displacement", cmd_simulate},
  };
  ExperimentConfig config;
  RawOptions raw;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->fallthrough();  // lets --config follow the subcommand name
    add_options(sub, config, raw);
    subs.emplace_back(sub, &cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Command* chosen = nullptr;
  for (const auto& [sub, cmd] : subs)
    if (sub->parsed()) chosen = cmd;
  config.scenario = config.scenario.empty() ? chosen->name : config.scenario;
  try {
    resolve(config, raw);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    return chosen->run(config);
  } catch (const Error& e) {
    const bool config_error = e.code() == Errc::Parse || e.code() == Errc::InvalidArgument ||
                              e.code() == Errc::DegenerateRegression || e.code() == Errc::RegionNotContained;
    std::cerr << (config_error ? "config error: " : "error: ") << e.what() << "\n";
    return config_error ? 2 : 1;
  }
}

}  // namespace awlab::cli
