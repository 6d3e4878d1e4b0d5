#include "awlab/level_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "awlab/error.hpp"

namespace awlab {
namespace {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + carry; }
};

}  // namespace

std::size_t LevelProfile::interval_of(double s) const {
  // k such that b_k < s <= b_{k+1}
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), s);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double LevelProfile::value(double s) const {
  if (s <= 0.0) return left_.front();
  if (s > breakpoints_.back()) return 0.0;
  const std::size_t k = interval_of(s);
  return right_[k] + slopes_[k] * (s - breakpoints_[k]);
}

double LevelProfile::right_limit(double s) const {
  if (s < 0.0) return left_.front();
  if (s >= breakpoints_.back()) return 0.0;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return right_[k] + slopes_[k] * (s - breakpoints_[k]);
}

double LevelProfile::left_derivative(double s) const {
  if (s <= 0.0) throw Error(Errc::InvalidArgument, "left derivative needs s > 0");
  if (s > breakpoints_.back()) return 0.0;
  return slopes_[interval_of(s)];
}

LevelProfile make_profile(const WeightedGraph& g, std::span<const double> levels, std::span<const Vertex> xs,
                          LevelProfile::Kind kind) {
  LevelProfile lp;
  lp.kind_ = kind;
  if (xs.empty()) return lp;

  std::vector<double> bps{0.0};
  for (Vertex x : xs) {
    bps.push_back(levels[x]);
    for (const auto& nb : g.neighbors(x)) bps.push_back(levels[nb.to]);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  const std::size_t count = bps.size();
  auto index = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(bps.begin(), bps.end(), v) - bps.begin());
  };

  std::vector<CompensatedSum> slope_diff(count + 1), jump(count);
  CompensatedSum mass, closed;
  for (Vertex x : xs) {
    const double gx = levels[x];
    const std::size_t ix = index(gx);
    for (const auto& nb : g.neighbors(x)) {
      const double gy = levels[nb.to];
      mass.add(nb.weight);
      if (gy < gx) {
        const long double rate = static_cast<long double>(nb.weight) / (static_cast<long double>(gx) - gy);
        slope_diff[index(gy)].add(-rate);
        slope_diff[ix].add(rate);
        closed.add(static_cast<long double>(nb.weight) * (0.5L * gx + 0.5L * gy));
      } else {
        jump[ix].add(nb.weight);
        closed.add(static_cast<long double>(nb.weight) * gx);
      }
    }
  }

  lp.breakpoints_ = std::move(bps);
  lp.left_.assign(count, 0.0);
  lp.right_.assign(count, 0.0);
  lp.slopes_.assign(count - 1, 0.0);
  lp.mass_ = static_cast<double>(mass.value());
  lp.closed_form_ = static_cast<double>(closed.value());

  CompensatedSum slope, integral;
  long double left = mass.value();
  for (std::size_t k = 0; k < count; ++k) {
    const long double right = left - jump[k].value();
    lp.left_[k] = static_cast<double>(left);
    lp.right_[k] = static_cast<double>(right);
    if (k + 1 == count) break;
    slope.add(slope_diff[k].value());
    const long double s = slope.value();
    const long double width = static_cast<long double>(lp.breakpoints_[k + 1]) - lp.breakpoints_[k];
    lp.slopes_[k] = static_cast<double>(s);
    left = right + s * width;
    if (left < 0.0L) left = 0.0L;
    integral.add(0.5L * (right + left) * width);
  }
  lp.integral_ = static_cast<double>(integral.value());
  return lp;
}

LevelProfile profile_u(const WeightedGraph& g, const GreenField& gf) {
  const auto levels = snap_levels(gf.values());
  return make_profile(g, levels, gf.region().members(), LevelProfile::Kind::Standard);
}

LevelProfile profile_u_occupation(const WeightedGraph& g, const GreenField& ambient, const Region& a) {
  for (Vertex x : a.members())
    if (!ambient.region().contains(x))
      throw Error(Errc::RegionNotContained, "region is not contained in the ambient Green field's region");
  const auto levels = snap_levels(ambient.values());
  return make_profile(g, levels, a.members(), LevelProfile::Kind::Occupation);
}

IntegralPair integral_u(const LevelProfile& lp) { return {lp.integral(), lp.closed_form_integral()}; }

FactorTwoReport factor_two_check(const WeightedGraph& g, const GreenField& gf, const LevelProfile& lp) {
  FactorTwoReport r;
  r.exact = exit_time_exact(g, gf);
  r.twice_integral = 2.0 * lp.integral();
  r.slack = r.twice_integral - r.exact;
  // The inequality holds term by term; compare with the closed form too so
  // that the trapezoid's rounding cannot mask or fake a failure.
  r.holds = r.exact <= r.twice_integral * (1.0 + 1e-12) && r.exact <= 2.0 * lp.closed_form_integral() * (1.0 + 1e-12);
  return r;
}

EduReport check_edu(const LevelProfile& lp, const ProfileFunction& f, double c, double rel_tol) {
  EduReport report;
  const auto bps = lp.breakpoints();
  auto test = [&](double s, bool right, double u, double derivative) {
    if (!(u > 0.0)) return;
    ++report.checked;
    const double cf = c * f(u);
    const double required = -cf * cf;
    const double margin = derivative - required;
    if (margin > rel_tol * std::max(std::abs(derivative), std::abs(required)))
      report.violations.push_back({s, right, u, derivative, required, margin});
  };
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    test(bps[k], true, lp.right_values()[k], lp.slopes()[k]);
    test(bps[k + 1], false, lp.left_values()[k + 1], lp.slopes()[k]);
  }
  return report;
}

void write_profile_csv(std::ostream& out, const LevelProfile& lp) {
  out << "s,u,left_derivative\n";
  char buf[128];
  const auto bps = lp.breakpoints();
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const double derivative = k == 0 ? 0.0 : lp.slopes()[k - 1];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", bps[k], lp.left_values()[k], derivative);
    out << buf;
  }
}

}  // namespace awlab
