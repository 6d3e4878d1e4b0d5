#include "awlab/bounds.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "awlab/error.hpp"

namespace awlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_exponent(double d) { return (2.0 - d) / d; }

}  // namespace

const char* to_string(CurveForm form) noexcept {
  switch (form) {
    case CurveForm::Power: return "power";
    case CurveForm::Exponential: return "exponential";
    case CurveForm::Reciprocal: return "reciprocal";
    case CurveForm::Numeric: return "numeric";
  }
  return "unknown";
}

double BoundCurve::rate(double v) const {
  const double fv = f_(std::max(v, 0.0));
  return c_ * c_ * fv * fv;
}

double BoundCurve::family_value(double start, double s) const {
  const double c2 = c_ * c_;
  switch (form_) {
    case CurveForm::Power: {
      const double e = power_exponent(f_.dimension());
      const double base = (start == kInf ? 0.0 : std::pow(start, e)) - c2 * e * s;
      if (base <= 0.0) return e > 0.0 ? 0.0 : kInf;
      return std::pow(base, 1.0 / e);
    }
    case CurveForm::Exponential:
      return start * std::exp(-c2 * s);
    case CurveForm::Reciprocal:
      return 1.0 / ((start == kInf ? 0.0 : 1.0 / start) + c2 * s);
    case CurveForm::Numeric:
      break;
  }
  return numeric_value(s);
}

double BoundCurve::family_time(double from, double to) const {
  const double c2 = c_ * c_;
  switch (form_) {
    case CurveForm::Power: {
      const double e = power_exponent(f_.dimension());
      const double from_term = from == kInf ? 0.0 : std::pow(from, e);
      return (from_term - std::pow(to, e)) / (c2 * e);
    }
    case CurveForm::Exponential:
      return std::log(from / to) / c2;
    case CurveForm::Reciprocal:
      return (1.0 / to - (from == kInf ? 0.0 : 1.0 / from)) / c2;
    case CurveForm::Numeric:
      break;
  }
  return kInf;
}

double BoundCurve::family_integral(double from, double to) const {
  const double c2 = c_ * c_;
  switch (form_) {
    case CurveForm::Power:
    case CurveForm::Exponential: {
      const double k = 2.0 / f_.dimension();
      return (std::pow(from, k) - std::pow(to, k)) / (k * c2);
    }
    case CurveForm::Reciprocal:
      return to > 0.0 ? std::log(from / to) / c2 : kInf;
    case CurveForm::Numeric:
      break;
  }
  return kInf;
}

double BoundCurve::numeric_value(double s) const {
  if (s <= 0.0) return grid_v_.front();
  if (s >= grid_s_.back()) {
    if (grid_crosses_zero_) return grid_dv_.back() * (s - grid_s_.back());
    return grid_v_.back();
  }
  // the equation is autonomous, so one RK4 step from the node below is as
  // accurate as the steps that built the grid
  auto it = std::upper_bound(grid_s_.begin(), grid_s_.end(), s);
  const auto i = static_cast<std::size_t>(it - grid_s_.begin()) - 1;
  const double h = s - grid_s_[i];
  if (h == 0.0) return grid_v_[i];
  auto deriv = [this](double w) { return -rate(w); };
  double w = grid_v_[i];
  const double half = 0.5 * h;
  for (int k = 0; k < 2; ++k) {
    const double k1 = deriv(w);
    const double k2 = deriv(w + 0.5 * half * k1);
    const double k3 = deriv(w + 0.5 * half * k2);
    const double k4 = deriv(w + half * k3);
    w += half / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return std::max(w, std::min(grid_v_[i + 1], 0.0));
}

double BoundCurve::numeric_integral() const {
  // v is decreasing, so int v_+ ds = int_0^{m(A)} w / rate(w) dw; the pieces
  // are split where F has kinks
  if (f_.kind() == ProfileFunction::Kind::Linear && !f_.floored()) return kInf;
  std::vector<double> cuts{0.0};
  if (f_.floored() && f_.floor() < initial_) cuts.push_back(f_.floor());
  if (f_.kind() == ProfileFunction::Kind::Custom)
    for (const auto& [x, y] : f_.table())
      if (x > 0.0 && x < initial_) cuts.push_back(x);
  cuts.push_back(initial_);
  std::sort(cuts.begin(), cuts.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrand = [this](double w) {
    const double r = rate(w);
    return r > 0.0 ? w / r : 0.0;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) total += integrator.integrate(integrand, cuts[i], cuts[i + 1]);
  return total;
}

double BoundCurve::v(double s) const {
  if (form_ == CurveForm::Numeric) return numeric_value(s);
  if (s <= floor_time_) return family_value(initial_, s);
  return floor_level_ - floor_rate_ * (s - floor_time_);
}

double BoundCurve::v_plus(double s) const { return std::max(v(s), 0.0); }

double BoundCurve::v_plus_A(double s, double mass) const { return std::clamp(v(s), 0.0, mass); }

double BoundCurve::time_to_reach(double level) const {
  if (level >= initial_) return 0.0;
  if (form_ == CurveForm::Numeric) {
    auto it = std::find_if(grid_v_.begin(), grid_v_.end(), [&](double x) { return x <= level; });
    if (it == grid_v_.end()) return kInf;
    const auto i = static_cast<std::size_t>(it - grid_v_.begin());
    double lo = grid_s_[i - 1], hi = grid_s_[i];
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (numeric_value(mid) > level ? lo : hi) = mid;
    }
    return hi;
  }
  if (level >= floor_level_ && floor_time_ > 0.0) return family_time(initial_, std::max(level, 0.0));
  return floor_time_ + (floor_level_ - level) / floor_rate_;
}

double BoundCurve::zero_time() const {
  if (form_ == CurveForm::Numeric) return grid_crosses_zero_ ? grid_s_.back() : kInf;
  if (f_.floored()) return floor_time_ + floor_level_ / floor_rate_;
  if (form_ == CurveForm::Power && f_.dimension() < 2.0) return family_time(initial_, 0.0);
  return kInf;
}

double BoundCurve::exit_integral() const {
  if (transient()) throw Error(Errc::InvalidArgument, "exit integral needs a finite initial mass");
  if (form_ == CurveForm::Numeric) return numeric_integral();
  if (!f_.floored()) return family_integral(initial_, 0.0);
  const double upper = initial_ > floor_level_ ? family_integral(initial_, floor_level_) : 0.0;
  return upper + floor_level_ * floor_level_ / (2.0 * floor_rate_);
}

BoundCurve solve_bound_curve(const ProfileFunction& f, double c, double mass, const CurveOptions& options) {
  if (!(c > 0.0)) throw Error(Errc::InvalidArgument, "isoperimetric constant must be positive");
  if (!(mass > 0.0)) throw Error(Errc::InvalidArgument, "initial mass must be positive");

  BoundCurve curve;
  curve.f_ = f;
  curve.c_ = c;
  curve.initial_ = mass;

  const bool closed = !options.force_numeric && f.kind() != ProfileFunction::Kind::Custom;
  if (mass == kTransient) {
    const bool summable = (f.kind() == ProfileFunction::Kind::Power && f.dimension() > 2.0) ||
                          (f.kind() == ProfileFunction::Kind::Linear && f.floored());
    if (!summable || !closed)
      throw Error(Errc::TransientUnsupported, "transient curve needs power d > 2 or floored identity in closed form");
  }

  if (closed) {
    if (f.kind() == ProfileFunction::Kind::Linear)
      curve.form_ = CurveForm::Reciprocal;
    else
      curve.form_ = f.dimension() == 2.0 ? CurveForm::Exponential : CurveForm::Power;
    if (f.floored()) {
      const double fl = f.floor();
      const double ffl = f.raw(fl);
      curve.floor_rate_ = c * c * ffl * ffl;
      if (mass > fl) {
        curve.floor_level_ = fl;
        curve.floor_time_ = curve.family_time(mass, fl);
      } else {
        curve.floor_level_ = mass;
        curve.floor_time_ = 0.0;
      }
    }
    return curve;
  }

  // Adaptive RK4 with step doubling and Richardson extrapolation.
  curve.form_ = CurveForm::Numeric;
  const double tol = options.rel_tol;
  auto deriv = [&](double v) { return -curve.rate(v); };
  auto rk4 = [&](double v, double h) {
    const double k1 = deriv(v);
    const double k2 = deriv(v + 0.5 * h * k1);
    const double k3 = deriv(v + 0.5 * h * k2);
    const double k4 = deriv(v + h * k3);
    return v + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  };
  auto two_halves = [&](double v, double h) { return rk4(rk4(v, 0.5 * h), 0.5 * h); };

  double s = 0.0, v = mass;
  double h = 1e-3 * mass / curve.rate(mass);
  auto push = [&](double at, double value) {
    curve.grid_s_.push_back(at);
    curve.grid_v_.push_back(value);
    curve.grid_dv_.push_back(deriv(value));
  };
  push(s, v);
  // levels where F has a kink; steps end exactly on them because the error
  // estimate assumes a smooth right-hand side
  std::vector<double> kinks;
  if (f.floored() && f.floor() < mass) kinks.push_back(f.floor());
  if (f.kind() == ProfileFunction::Kind::Custom)
    for (const auto& [x, y] : f.table())
      if (x > f.floor() && x < mass) kinks.push_back(x);
  std::sort(kinks.begin(), kinks.end(), std::greater<>());
  kinks.push_back(0.0);
  std::size_t next_kink = 0;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > 5'000'000) throw Error(Errc::SolverFailed, "bound curve integration did not terminate");
    const double target = kinks[next_kink];
    const double full = rk4(v, h);
    const double half = two_halves(v, h);
    if (half <= target || full <= target) {
      double lo = 0.0, hi = h;
      for (int b = 0; b < 200 && hi - lo > 1e-16 * (s + hi); ++b) {
        const double mid = 0.5 * (lo + hi);
        (two_halves(v, mid) > target ? lo : hi) = mid;
      }
      const double err = std::abs(two_halves(v, hi) - rk4(v, hi)) / 15.0;
      if (err <= tol * v) {
        s += hi;
        v = target;
        push(s, v);
        if (target == 0.0) {
          curve.grid_crosses_zero_ = true;
          break;
        }
        ++next_kink;
        h = hi;
      } else {
        h = 0.5 * hi;
      }
      continue;
    }
    const double err = std::abs(half - full) / 15.0;
    const double scale = std::max(std::abs(half), 1e-12 * mass);
    if (err <= tol * scale) {
      const double next = half + (half - full) / 15.0;
      s += h;
      v = next > 0.0 ? next : half;
      push(s, v);
      if (v <= 1e-13 * mass || s > 1e18) {
        // the rest of the descent takes int_0^v dw / rate(w), which is
        // finite when F(w)^-2 is integrable at zero
        const double rest = inverse_square_integral(f, 0.0, v) / (c * c);
        if (std::isfinite(rest)) {
          push(s + rest, 0.0);
          curve.grid_crosses_zero_ = true;
        }
        break;
      }
      const double factor = err > 0.0 ? 0.9 * std::pow(tol * scale / err, 0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
    } else {
      h *= std::max(0.1, 0.9 * std::pow(tol * scale / err, 0.25));
    }
  }
  return curve;
}

double bound_exit(const BoundCurve& curve) { return 2.0 * curve.exit_integral(); }

double bound_occupation(const BoundCurve& curve, double mass) {
  if (!curve.transient()) throw Error(Errc::TransientUnsupported, "occupation bound needs the transient curve");
  if (!(mass > 0.0)) return 0.0;
  const double reach = curve.time_to_reach(mass);
  const BoundCurve killed = solve_bound_curve(curve.profile(), curve.constant(), mass);
  return 2.0 * (mass * reach + killed.exit_integral());
}

double closed_form_bound(BoundKind kind, ProfileFunction::Kind family, double d, double c, double mass,
                         double root_mass) {
  const double c2 = c * c;
  if (family == ProfileFunction::Kind::Power) {
    if (kind == BoundKind::Exit) return d / c2 * std::pow(mass, 2.0 / d);
    if (d > 2.0) return d * d / (c2 * (d - 2.0)) * std::pow(mass, 2.0 / d);
    throw Error(Errc::UnsupportedCombination, "occupation bound for the power family needs d > 2");
  }
  if (family == ProfileFunction::Kind::Linear) {
    if (!(root_mass > 0.0)) throw Error(Errc::UnsupportedCombination, "identity family needs m(o) > 0");
    const double lead = kind == BoundKind::Exit ? 1.0 : 3.0;
    return (lead + 2.0 * std::log(mass / root_mass)) / c2;
  }
  throw Error(Errc::UnsupportedCombination, "no closed form for custom profiles");
}

double inverse_square_integral(const ProfileFunction& f, double a, double b) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  const double fl = f.floor();
  if (a < fl) {
    const double ffl = f.raw(fl);
    total += (std::min(b, fl) - a) / (ffl * ffl);
    a = fl;
    if (!(b > a)) return total;
  }
  if (f.kind() == ProfileFunction::Kind::Custom) {
    if (b == kInf) return kInf;  // F is constant past the table
    // F is piecewise linear: integrate 1/F^2 exactly on each piece
    std::vector<double> cuts{a};
    for (const auto& [x, y] : f.table())
      if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double x0 = cuts[i], x1 = cuts[i + 1];
      const double y0 = f.raw(x0), y1 = f.raw(x1);
      total += (x1 - x0) / (y0 * y1);
    }
    return total;
  }
  const double p = f.kind() == ProfileFunction::Kind::Linear ? 2.0 : 2.0 - 2.0 / f.dimension();
  if (a == 0.0 && p >= 1.0) return kInf;
  if (p == 1.0) return b == kInf ? kInf : total + std::log(b / a);
  if (b == kInf) return p > 1.0 ? total + std::pow(a, 1.0 - p) / (p - 1.0) : kInf;
  return total + (std::pow(b, 1.0 - p) - std::pow(a, 1.0 - p)) / (1.0 - p);
}

TransienceVerdict transience_diagnostic(const ProfileFunction& f, double c, double inf_m, double max_mass) {
  TransienceVerdict verdict;
  verdict.tail_integral = inverse_square_integral(f, 1.0, kInf);
  verdict.finite = std::isfinite(verdict.tail_integral);
  if (!verdict.finite) return verdict;
  // int_{u(t)}^{u(0)} ds/F^2 >= C^2 t; once C^2 t / 2 dominates int_1^{u(0)},
  // int_{u(t)}^1 ds/F^2 >= C^2 t / 2, which forces u(t) < inf_m as soon as
  // C^2 t / 2 also exceeds int_{inf_m}^1 ds/F^2.
  const double upper = max_mass == kInf ? verdict.tail_integral : inverse_square_integral(f, 1.0, std::max(1.0, max_mass));
  const double below = inf_m < 1.0 ? inverse_square_integral(f, inf_m, 1.0) : 0.0;
  verdict.t0 = 2.0 * std::max(upper, below) / (c * c);
  return verdict;
}

void write_curve_csv(std::ostream& out, const BoundCurve& curve, double mass, double s_max, int points) {
  out << "s,v,v_plus,v_plusA\n";
  char buf[160];
  for (int i = 0; i < points; ++i) {
    const double s = points > 1 ? s_max * i / (points - 1) : 0.0;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s, curve.v(s), curve.v_plus(s), curve.v_plus_A(s, mass));
    out << buf;
  }
}

}  // namespace awlab
