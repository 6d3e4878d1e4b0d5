#include "awlab/cli/config.hpp"

#include <filesystem>
#include <optional>
#include <sstream>

#include "awlab/error.hpp"

namespace awlab::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class T, class Parse>
T parse_number(const std::string& text, Parse&& parse, const std::string& what) {
  try {
    std::size_t used = 0;
    const T value = parse(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::logic_error&) {
    throw Error(Errc::Parse, "malformed " + what + ": '" + text + "'");
  }
}

int to_int(const std::string& text, const std::string& what) {
  return parse_number<int>(text, [](const std::string& s, std::size_t* i) { return std::stoi(s, i); }, what);
}

double to_double(const std::string& text, const std::string& what) {
  return parse_number<double>(text, [](const std::string& s, std::size_t* i) { return std::stod(s, i); }, what);
}

const char* kind_name(GraphSource::Kind kind) {
  switch (kind) {
    case GraphSource::Kind::None: return "none";
    case GraphSource::Kind::File: return "file";
    case GraphSource::Kind::Lattice: return "lattice";
    case GraphSource::Kind::Environment: return "environment";
    case GraphSource::Kind::Percolation: return "percolation";
  }
  return "unknown";
}

}  // namespace

GraphSource parse_lattice(const std::string& text) {
  GraphSource src;
  src.kind = GraphSource::Kind::Lattice;
  std::optional<int> d, n, side;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(Errc::Parse, "lattice spec items look like key=value: '" + item + "'");
    const auto key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "d")
      d = to_int(value, "lattice dimension");
    else if (key == "n")
      n = to_int(value, "lattice half-width");
    else if (key == "side")
      side = to_int(value, "lattice side");
    else
      throw Error(Errc::Parse, "unknown lattice key '" + key + "'");
  }
  if (!d) throw Error(Errc::Parse, "lattice spec needs d=");
  if (n.has_value() == side.has_value()) throw Error(Errc::Parse, "lattice spec needs exactly one of n= and side=");
  if (*d < 1 || *d > kMaxLatticeDimension) throw Error(Errc::InvalidArgument, "lattice dimension must be 1..4");
  src.d = *d;
  src.n = side ? LatticeBox::from_side(*d, *side).n : *n;
  if (src.n < 0) throw Error(Errc::InvalidArgument, "lattice half-width must be >= 0");
  return src;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item, "integer"));
      continue;
    }
    const int lo = to_int(item.substr(0, dots), "range start");
    const int hi = to_int(item.substr(dots + 2), "range end");
    if (hi < lo) throw Error(Errc::Parse, "empty range '" + item + "'");
    for (int r = lo; r <= hi; ++r) out.push_back(r);
  }
  if (out.empty()) throw Error(Errc::Parse, "empty integer list");
  return out;
}

RegionSpec parse_region(const std::string& text) {
  RegionSpec spec;
  if (text == "full") return spec;
  if (text.rfind("ball:", 0) == 0) {
    spec.kind = RegionSpec::Kind::Balls;
    const auto radii = parse_int_list(text.substr(5));
    spec.r_min = radii.front();
    spec.r_max = radii.back();
    if (spec.r_min < 0 || spec.r_max < spec.r_min) throw Error(Errc::Parse, "bad ball radius range");
    return spec;
  }
  if (text.rfind("list:", 0) == 0) {
    spec.kind = RegionSpec::Kind::List;
    for (const auto& item : split(text.substr(5), ','))
      spec.labels.push_back(parse_number<Label>(
          item, [](const std::string& s, std::size_t* i) { return std::stoll(s, i); }, "vertex label"));
    if (spec.labels.empty()) throw Error(Errc::Parse, "empty region list");
    return spec;
  }
  throw Error(Errc::Parse, "unknown region spec '" + text + "'");
}

ProfileFunction parse_profile(const std::string& text, double floor) {
  if (text == "id" || text == "linear") return ProfileFunction::linear(floor);
  if (text.rfind("power:", 0) == 0) return ProfileFunction::power(to_double(text.substr(6), "power dimension"), floor);
  if (text.rfind("custom:", 0) == 0) {
    std::vector<std::pair<double, double>> table;
    for (const auto& item : split(text.substr(7), ',')) {
      const auto at = item.find('@');
      if (at == std::string::npos) throw Error(Errc::Parse, "custom profile points look like x@F");
      table.emplace_back(to_double(item.substr(0, at), "x"), to_double(item.substr(at + 1), "F(x)"));
    }
    return ProfileFunction::custom(std::move(table), floor);
  }
  throw Error(Errc::Parse, "unknown profile '" + text + "'");
}

void validate(const ExperimentConfig& config) {
  using Kind = GraphSource::Kind;
  if (config.graph.kind == Kind::File && !std::filesystem::exists(config.graph.path))
    throw Error(Errc::InvalidArgument, "graph file not found: " + config.graph.path);
  if ((config.graph.kind == Kind::Environment || config.graph.kind == Kind::Percolation) && !config.seed)
    throw Error(Errc::InvalidArgument, "randomized graph source needs --seed");
  if (config.graph.kind == Kind::Percolation &&
      EnvironmentLaw::parse(config.graph.law).kind() != EnvironmentLaw::Kind::Bernoulli)
    throw Error(Errc::InvalidArgument, "percolation needs a bernoulli law");
  if (config.graph.kind == Kind::Environment) (void)EnvironmentLaw::parse(config.graph.law);
  (void)parse_profile(resolved_f_spec(config));
  if (!(config.tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  if (config.quantity != "exit" && config.quantity != "occupation")
    throw Error(Errc::InvalidArgument, "quantity must be exit or occupation");
  if (!(config.box_factor >= 1.0)) throw Error(Errc::InvalidArgument, "box factor must be at least 1");
  if (config.seeds == 0) throw Error(Errc::InvalidArgument, "seeds must be at least 1");
  if (config.method != "exhaustive" && config.method != "levelset" && config.method != "sampled" &&
      config.method != "betac")
    throw Error(Errc::InvalidArgument, "unknown isoperimetry method '" + config.method + "'");
  if (config.growth != "weighted" && config.growth != "uniform")
    throw Error(Errc::InvalidArgument, "growth must be weighted or uniform");
  if (config.mode != "exit" && config.mode != "occupation" && config.mode != "displacement" && config.mode != "tree")
    throw Error(Errc::InvalidArgument, "unknown simulation mode '" + config.mode + "'");
  if ((config.method == "sampled" || config.method == "betac") && !config.seed)
    throw Error(Errc::InvalidArgument, "sampling needs --seed");
}

std::string resolved_f_spec(const ExperimentConfig& config) {
  if (!config.f_spec.empty()) return config.f_spec;
  if (config.graph.kind == GraphSource::Kind::File) return "id";
  return "power:" + std::to_string(config.graph.d);
}

ProfileFunction resolve_profile(const ExperimentConfig& config, double floor) {
  return parse_profile(resolved_f_spec(config), floor);
}

WeightedGraph build_graph(const ExperimentConfig& config, int n) {
  const auto& src = config.graph;
  switch (src.kind) {
    case GraphSource::Kind::None:
      break;
    case GraphSource::Kind::File:
      return load_graph(src.path);
    case GraphSource::Kind::Lattice:
      return lattice_graph(src.d, n);
    case GraphSource::Kind::Environment:
      return environment_graph(
          sample_environment(EnvironmentLaw::parse(src.law), LatticeBox{src.d, n}, config.seed.value_or(0), config.threads));
    case GraphSource::Kind::Percolation:
      return percolation_cluster(
                 sample_environment(EnvironmentLaw::parse(src.law), LatticeBox{src.d, n}, config.seed.value_or(0),
                                    config.threads))
          .graph;
  }
  throw Error(Errc::InvalidArgument, "need --graph or --lattice");
}

WeightedGraph build_graph(const ExperimentConfig& config) { return build_graph(config, config.graph.n); }

std::string describe(const GraphSource& source) {
  switch (source.kind) {
    case GraphSource::Kind::None: return "";
    case GraphSource::Kind::File: return source.path;
    case GraphSource::Kind::Lattice: return "d=" + std::to_string(source.d) + ",n=" + std::to_string(source.n);
    case GraphSource::Kind::Environment:
    case GraphSource::Kind::Percolation:
      return "d=" + std::to_string(source.d) + ",n=" + std::to_string(source.n);
  }
  return "";
}

std::string describe(const RegionSpec& region) {
  switch (region.kind) {
    case RegionSpec::Kind::Full: return "full";
    case RegionSpec::Kind::Balls: return "ball:" + std::to_string(region.r_min) + ".." + std::to_string(region.r_max);
    case RegionSpec::Kind::List: {
      std::string out = "list:";
      for (std::size_t i = 0; i < region.labels.size(); ++i) out += (i ? "," : "") + std::to_string(region.labels[i]);
      return out;
    }
  }
  return "";
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json graph{{"kind", kind_name(c.graph.kind)}, {"spec", describe(c.graph)}};
  if (c.graph.kind == GraphSource::Kind::Environment || c.graph.kind == GraphSource::Kind::Percolation)
    graph["law"] = c.graph.law;
  nlohmann::json j{
      {"scenario", c.scenario},     {"graph", graph},         {"region", describe(c.region)},
      {"F", resolved_f_spec(c)},              {"floor_at_root", c.floor_at_root},
      {"tol", c.tol},               {"trials", c.trials},     {"horizon", c.horizon},
      {"samples", c.samples},       {"max_vertices", c.max_vertices},
      {"quantity", c.quantity},     {"radii", c.radii},       {"box_factor", c.box_factor},
      {"seeds", c.seeds},           {"method", c.method},     {"growth", c.growth},
      {"beta0", c.beta0},           {"n0", c.n0},             {"max_measure", c.max_measure},
      {"mode", c.mode},             {"steps", c.steps},       {"q", c.q},
  };
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  return j;
}

std::string to_ini(const ExperimentConfig& c, const std::string& subcommand) {
  std::ostringstream out;
  out.precision(17);
  out << "[" << subcommand << "]\n";
  switch (c.graph.kind) {
    case GraphSource::Kind::None: break;
    case GraphSource::Kind::File: out << "graph=\"" << c.graph.path << "\"\n"; break;
    case GraphSource::Kind::Lattice: out << "lattice=\"" << describe(c.graph) << "\"\n"; break;
    case GraphSource::Kind::Environment:
      out << "lattice=\"" << describe(c.graph) << "\"\nenv=\"" << c.graph.law << "\"\n";
      break;
    case GraphSource::Kind::Percolation:
      out << "lattice=\"" << describe(c.graph) << "\"\npercolation=" << c.graph.law.substr(10) << "\n";
      break;
  }
  out << "region=\"" << describe(c.region) << "\"\n";
  out << "F=\"" << resolved_f_spec(c) << "\"\n";
  if (!c.floor_at_root) out << "no-floor=true\n";
  out << "tol=" << c.tol << "\n";
  if (c.seed) out << "seed=" << *c.seed << "\n";
  if (!c.scenario.empty()) out << "scenario=\"" << c.scenario << "\"\n";
  out << "trials=" << c.trials << "\nhorizon=" << c.horizon << "\nsamples=" << c.samples
      << "\nmax-vertices=" << c.max_vertices << "\nquantity=" << c.quantity << "\nbox-factor=" << c.box_factor
      << "\nseeds=" << c.seeds << "\nmethod=" << c.method << "\ngrowth=" << c.growth << "\nbeta0=" << c.beta0
      << "\nn0=" << c.n0 << "\nmax-measure=" << c.max_measure << "\nmode=" << c.mode << "\nsteps=" << c.steps
      << "\nq=" << c.q << "\n";
  if (!c.radii.empty()) {
    out << "radii=\"";
    for (std::size_t i = 0; i < c.radii.size(); ++i) out << (i ? "," : "") << c.radii[i];
    out << "\"\n";
  }
  return out.str();
}

}  // namespace awlab::cli
