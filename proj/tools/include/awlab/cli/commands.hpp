#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "awlab/bounds.hpp"
#include "awlab/cli/config.hpp"
#include "json.hpp"

namespace awlab::cli {

/// One region of a verify-bounds sweep. For the occupation quantity, `exact`
/// is sum_A m G of the ambient box field and `twice_integral` is 2 int u~.
struct VerifyRow {
  std::string region;
  std::size_t size = 0;
  double measure = 0.0;
  double root_measure = 0.0;
  double exact = 0.0;
  double twice_integral = 0.0;
  double bound = 0.0;
  std::optional<double> closed_form;
  double c_levelset = 0.0;
  std::size_t violations = 0;
  bool level_sets_ok = false;
  bool factor_two = false;
  bool ok = false;
};

struct VerifyReport {
  std::string quantity;
  std::vector<VerifyRow> rows;
  bool ok = false;
};

/// graph -> Green field -> profile -> level-set constant -> check_edu ->
/// comparison curve -> bound, one row per region of the sweep.
VerifyReport run_verify_bounds(const ExperimentConfig& config);

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;
};

/// Least squares of log y on log x. Throws DegenerateRegression with fewer
/// than two distinct x.
Regression fit_loglog(std::span<const double> x, std::span<const double> y);

struct ScalingPoint {
  int radius = 0;
  int box = 0;  // lattice half-width used
  std::size_t size = 0;
  double measure = 0.0;
  double value = 0.0;
};

struct ScalingSeries {
  std::optional<std::uint64_t> seed;
  std::vector<ScalingPoint> points;
  Regression fit;
};

struct ScalingReport {
  std::string quantity;
  std::vector<ScalingSeries> series;  // one per environment seed
};

/// Exit time of ball(r) killed outside the ball, or occupation of ball(r)
/// in the box of half-width max(r + 1, ceil(box_factor * r)), against m(ball).
ScalingReport run_scaling(const ExperimentConfig& config);

struct TransiencePoint {
  int radius = 0;
  double value = 0.0;
  std::optional<double> increment;  // (value - previous) / previous
};

struct TransienceReport {
  std::vector<Label> region;
  std::vector<TransiencePoint> points;
  TransienceVerdict verdict;
  std::string f_spec;
  double c_levelset = 0.0;
  double inf_measure = 0.0;
  double green_at_root = 0.0;  // largest box
  bool settled = false;        // last increment below 1%
  bool growing = false;        // every increment above 10%
};

/// occupation_truncated over the radii plus the summability verdict for F.
TransienceReport run_transience(const ExperimentConfig& config);

nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const ScalingReport& report);
nlohmann::json to_json(const TransienceReport& report);
std::string to_csv(const VerifyReport& report);
std::string to_csv(const ScalingReport& report);
std::string to_csv(const TransienceReport& report);

/// Entry point of the awlab tool. Exit codes: 0 ok, 1 a check failed or the
/// pipeline raised, 2 configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace awlab::cli
