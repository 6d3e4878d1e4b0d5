#include "awlab/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "awlab/error.hpp"
#include "awlab/green.hpp"
#include "awlab/isoperimetry.hpp"
#include "awlab/level_profile.hpp"
#include "awlab/parallel.hpp"

namespace awlab::cli {
namespace {

// Floating-point allowance when comparing two separately rounded sides of
// an inequality that may hold with equality.
constexpr double kCompareSlack = 1e-10;

bool leq(double a, double b) { return a <= b + kCompareSlack * std::abs(b); }

struct NamedRegion {
  std::string name;
  Region region;
};

std::vector<NamedRegion> sweep_regions(const WeightedGraph& g, const RegionSpec& spec) {
  std::vector<NamedRegion> out;
  switch (spec.kind) {
    case RegionSpec::Kind::Full:
      out.push_back({"full", Region::interior(g)});
      break;
    case RegionSpec::Kind::Balls:
      for (int r = spec.r_min; r <= spec.r_max; ++r)
        out.push_back({"ball:" + std::to_string(r), ball(g, static_cast<std::size_t>(r))});
      break;
    case RegionSpec::Kind::List:
      out.push_back({"list", Region::from_labels(g, spec.labels)});
      break;
  }
  return out;
}

double occupation_sum(const WeightedGraph& g, const GreenField& gf, const Region& a) {
  double total = 0.0;
  for (Vertex x : a.members()) total += g.measure(x) * gf.value(x);
  return total;
}

std::optional<double> closed_form_for(BoundKind kind, const ProfileFunction& f, double c, double mass, double mo) {
  if (f.kind() == ProfileFunction::Kind::Power && !f.floored()) {
    if (kind == BoundKind::Occupation && !(f.dimension() > 2.0)) return std::nullopt;
    return closed_form_bound(kind, f.kind(), f.dimension(), c, mass, mo);
  }
  if (f.kind() == ProfileFunction::Kind::Linear && f.floor() == mo && mass >= mo)
    return closed_form_bound(kind, f.kind(), 1.0, c, mass, mo);
  return std::nullopt;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int box_for(const ExperimentConfig& config, int r) {
  return std::max(r + 1, static_cast<int>(std::ceil(config.box_factor * r)));
}

}  // namespace

VerifyReport run_verify_bounds(const ExperimentConfig& config) {
  const WeightedGraph g = build_graph(config);
  const GreenOptions opts{config.tol};
  const double mo = g.measure(g.root());
  const ProfileFunction f = resolve_profile(config, config.floor_at_root ? mo : 0.0);
  const auto regions = sweep_regions(g, config.region);

  VerifyReport report;
  report.quantity = config.quantity;
  report.rows.resize(regions.size());

  if (config.quantity == "exit") {
    parallel_for(regions.size(), config.threads, [&](std::size_t i) {
      const auto& [name, a] = regions[i];
      const GreenField gf = green_killed(g, a, opts);
      const LevelProfile lp = profile_u(g, gf);
      const FactorTwoReport f2 = factor_two_check(g, gf, lp);
      const IsoReport iso = cis_levelsets(g, gf, f);
      const EduReport edu = check_edu(lp, f, iso.constant);
      const BoundCurve curve = solve_bound_curve(f, iso.constant, a.measure());
      VerifyRow& row = report.rows[i];
      row.region = name;
      row.size = a.size();
      row.measure = a.measure();
      row.root_measure = mo;
      row.exact = f2.exact;
      row.twice_integral = f2.twice_integral;
      row.bound = bound_exit(curve);
      row.closed_form = closed_form_for(BoundKind::Exit, f, iso.constant, a.measure(), mo);
      row.c_levelset = iso.constant;
      row.violations = edu.violations.size();
      row.level_sets_ok = audit_level_sets(g, gf).ok();
      row.factor_two = f2.holds;
      row.ok = row.level_sets_ok && row.factor_two && edu.ok() && leq(row.twice_integral, row.bound);
    });
  } else {
    const GreenField ambient = green_killed(g, Region::interior(g), opts);
    const LevelProfile lp = profile_u(g, ambient);
    const IsoReport iso = cis_levelsets(g, ambient, f);
    const EduReport edu = check_edu(lp, f, iso.constant);
    const bool level_sets_ok = audit_level_sets(g, ambient).ok();
    const BoundCurve curve = solve_bound_curve(f, iso.constant, kTransient);
    parallel_for(regions.size(), config.threads, [&](std::size_t i) {
      const auto& [name, a] = regions[i];
      const LevelProfile lt = profile_u_occupation(g, ambient, a);
      VerifyRow& row = report.rows[i];
      row.region = name;
      row.size = a.size();
      row.measure = a.measure();
      row.root_measure = mo;
      row.exact = occupation_sum(g, ambient, a);
      row.twice_integral = 2.0 * lt.integral();
      row.bound = bound_occupation(curve, a.measure());
      row.closed_form = closed_form_for(BoundKind::Occupation, f, iso.constant, a.measure(), mo);
      row.c_levelset = iso.constant;
      row.violations = edu.violations.size();
      row.level_sets_ok = level_sets_ok;
      row.factor_two = row.exact <= row.twice_integral * (1.0 + 1e-12);
      row.ok = row.level_sets_ok && row.factor_two && edu.ok() && leq(row.twice_integral, row.bound);
    });
  }
  report.ok = std::all_of(report.rows.begin(), report.rows.end(), [](const VerifyRow& r) { return r.ok; });
  return report;
}

Regression fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::InvalidArgument, "regression inputs differ in length");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(Errc::InvalidArgument, "log-log regression needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  if (n < 2) throw Error(Errc::DegenerateRegression, "regression needs at least two sizes");
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(Errc::DegenerateRegression, "regression needs at least two distinct sizes");
  Regression fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    fit.residuals.push_back(r);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

ScalingReport run_scaling(const ExperimentConfig& config) {
  if (config.radii.size() < 2) throw Error(Errc::DegenerateRegression, "scaling sweep needs at least two radii");
  const bool randomized = config.graph.kind == GraphSource::Kind::Environment ||
                          config.graph.kind == GraphSource::Kind::Percolation;
  if (config.graph.kind == GraphSource::Kind::File)
    throw Error(Errc::InvalidArgument, "scaling needs a lattice or environment source");
  const std::size_t seeds = randomized ? config.seeds : 1;
  const GreenOptions opts{config.tol};

  ScalingReport report;
  report.quantity = config.quantity;
  report.series.resize(seeds);
  const std::size_t radii = config.radii.size();
  std::vector<ScalingPoint> points(seeds * radii);
  parallel_for(points.size(), config.threads, [&](std::size_t k) {
    ExperimentConfig local = config;
    local.threads = 1;
    if (randomized) local.seed = *config.seed + k / radii;
    const int r = config.radii[k % radii];
    ScalingPoint& p = points[k];
    p.radius = r;
    if (config.quantity == "exit") {
      p.box = r + 1;
      const WeightedGraph g = build_graph(local, p.box);
      const Region a = ball(g, static_cast<std::size_t>(r));
      p.size = a.size();
      p.measure = a.measure();
      p.value = exit_time_exact(g, green_killed(g, a, opts));
    } else {
      p.box = box_for(config, r);
      const WeightedGraph g = build_graph(local, p.box);
      const Region a = ball(g, static_cast<std::size_t>(r));
      p.size = a.size();
      p.measure = a.measure();
      p.value = occupation_sum(g, green_killed(g, Region::interior(g), opts), a);
    }
  });
  for (std::size_t s = 0; s < seeds; ++s) {
    auto& series = report.series[s];
    if (randomized) series.seed = *config.seed + s;
    series.points.assign(points.begin() + static_cast<std::ptrdiff_t>(s * radii),
                         points.begin() + static_cast<std::ptrdiff_t>((s + 1) * radii));
    std::vector<double> xs, ys;
    for (const auto& p : series.points) {
      xs.push_back(p.measure);
      ys.push_back(p.value);
    }
    series.fit = fit_loglog(xs, ys);
  }
  return report;
}

TransienceReport run_transience(const ExperimentConfig& config) {
  if (config.radii.empty()) throw Error(Errc::InvalidArgument, "transience needs --radii");
  if (config.graph.kind == GraphSource::Kind::File)
    throw Error(Errc::InvalidArgument, "transience needs a lattice or environment source");
  if (!std::is_sorted(config.radii.begin(), config.radii.end()))
    throw Error(Errc::InvalidArgument, "transience radii must increase");
  const GreenOptions opts{config.tol};
  const WeightedGraph smallest = build_graph(config, config.radii.front());

  TransienceReport report;
  switch (config.region.kind) {
    case RegionSpec::Kind::Full:
      report.region = {smallest.label(smallest.root())};
      break;
    case RegionSpec::Kind::Balls:
      report.region = ball(smallest, static_cast<std::size_t>(config.region.r_min)).labels(smallest);
      break;
    case RegionSpec::Kind::List:
      report.region = config.region.labels;
      break;
  }
  const GraphFamily family = [&](int n) { return build_graph(config, n); };
  const auto values = occupation_truncated(family, report.region, config.radii, opts);
  for (std::size_t i = 0; i < values.size(); ++i) {
    TransiencePoint p{values[i].radius, values[i].value, std::nullopt};
    if (i > 0) p.increment = (values[i].value - values[i - 1].value) / values[i - 1].value;
    report.points.push_back(p);
  }
  if (report.points.size() > 1) {
    report.settled = *report.points.back().increment < 0.01;
    report.growing = std::all_of(report.points.begin() + 1, report.points.end(),
                                 [](const TransiencePoint& p) { return *p.increment > 0.10; });
  }

  const WeightedGraph largest = build_graph(config, config.radii.back());
  const GreenField gf = green_killed(largest, Region::interior(largest), opts);
  double inf_m = std::numeric_limits<double>::infinity();
  for (Vertex v : gf.region().members()) inf_m = std::min(inf_m, largest.measure(v));
  const ProfileFunction f = resolve_profile(config, config.floor_at_root ? largest.measure(largest.root()) : 0.0);
  report.f_spec = f.describe();
  report.c_levelset = cis_levelsets(largest, gf, f).constant;
  report.inf_measure = inf_m;
  report.green_at_root = gf.at_root();
  report.verdict = transience_diagnostic(f, report.c_levelset, inf_m);
  return report;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"region", r.region},
                    {"size", r.size},
                    {"measure", r.measure},
                    {"root_measure", r.root_measure},
                    {"exact", r.exact},
                    {"twice_integral", r.twice_integral},
                    {"bound", r.bound},
                    {"closed_form", r.closed_form ? nlohmann::json(*r.closed_form) : nlohmann::json(nullptr)},
                    {"c_levelset", r.c_levelset},
                    {"violations", r.violations},
                    {"level_sets_ok", r.level_sets_ok},
                    {"factor_two", r.factor_two},
                    {"ok", r.ok}});
  }
  return {{"quantity", report.quantity}, {"rows", rows}, {"ok", report.ok}};
}

nlohmann::json to_json(const ScalingReport& report) {
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : report.series) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : s.points)
      points.push_back({{"radius", p.radius}, {"box", p.box}, {"size", p.size}, {"measure", p.measure}, {"value", p.value}});
    series.push_back({{"seed", s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr)},
                      {"points", points},
                      {"slope", s.fit.slope},
                      {"intercept", s.fit.intercept},
                      {"r2", s.fit.r2},
                      {"residuals", s.fit.residuals}});
  }
  return {{"quantity", report.quantity}, {"series", series}};
}

nlohmann::json to_json(const TransienceReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.points)
    points.push_back({{"radius", p.radius},
                      {"value", p.value},
                      {"increment", p.increment ? nlohmann::json(*p.increment) : nlohmann::json(nullptr)}});
  nlohmann::json verdict{{"finite", report.verdict.finite},
                         {"tail_integral", std::isfinite(report.verdict.tail_integral)
                                               ? nlohmann::json(report.verdict.tail_integral)
                                               : nlohmann::json("inf")},
                         {"t0", report.verdict.t0 ? nlohmann::json(*report.verdict.t0) : nlohmann::json(nullptr)}};
  return {{"region", report.region},         {"points", points},
          {"F", report.f_spec},              {"c_levelset", report.c_levelset},
          {"inf_measure", report.inf_measure}, {"green_at_root", report.green_at_root},
          {"settled", report.settled},       {"growing", report.growing},
          {"verdict", verdict}};
}

std::string to_csv(const VerifyReport& report) {
  std::ostringstream out;
  out << "region,size,measure,exact,twice_integral,bound,closed_form,c_levelset,violations,level_sets_ok,ok\n";
  for (const auto& r : report.rows)
    out << r.region << ',' << r.size << ',' << fmt(r.measure) << ',' << fmt(r.exact) << ',' << fmt(r.twice_integral)
        << ',' << fmt(r.bound) << ',' << (r.closed_form ? fmt(*r.closed_form) : "") << ',' << fmt(r.c_levelset) << ','
        << r.violations << ',' << r.level_sets_ok << ',' << r.ok << '\n';
  return out.str();
}

std::string to_csv(const ScalingReport& report) {
  std::ostringstream out;
  out << "seed,radius,box,size,measure,value\n";
  for (const auto& s : report.series)
    for (const auto& p : s.points)
      out << (s.seed ? std::to_string(*s.seed) : "") << ',' << p.radius << ',' << p.box << ',' << p.size << ','
          << fmt(p.measure) << ',' << fmt(p.value) << '\n';
  return out.str();
}

std::string to_csv(const TransienceReport& report) {
  std::ostringstream out;
  out << "radius,value,increment\n";
  for (const auto& p : report.points)
    out << p.radius << ',' << fmt(p.value) << ',' << (p.increment ? fmt(*p.increment) : "") << '\n';
  return out.str();
}

}  // namespace awlab::cli
