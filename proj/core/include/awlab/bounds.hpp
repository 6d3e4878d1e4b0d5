#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "awlab/profile_function.hpp"

namespace awlab {

/// Initial mass meaning v(0) = +inf (the transient comparison curve).
inline constexpr double kTransient = std::numeric_limits<double>::infinity();

enum class CurveForm {
  Power,        // (m^e - C^2 e s)^(1/e), e = (2 - d) / d
  Exponential,  // m exp(-C^2 s), d = 2
  Reciprocal,   // 1/v = 1/m + C^2 s, F = id
  Numeric,      // adaptive RK4 grid with Hermite interpolation
};

const char* to_string(CurveForm form) noexcept;

struct CurveOptions {
  bool force_numeric = false;
  double rel_tol = 1e-11;  // local error per step relative to v
};

/// Solution of v' = -(C F(v))^2 with v(0) = m(A), or v(0) = +inf for the
/// transient curve. A floored F makes the curve linear once it drops below
/// the floor, so it reaches zero in finite time.
class BoundCurve {
 public:
  CurveForm form() const noexcept { return form_; }
  bool transient() const noexcept { return initial_ == kTransient; }
  double initial_mass() const noexcept { return initial_; }
  double constant() const noexcept { return c_; }
  const ProfileFunction& profile() const noexcept { return f_; }

  /// Unclamped value; continues linearly below zero for floored profiles.
  double v(double s) const;
  double v_plus(double s) const;
  double v_plus_A(double s, double mass) const;

  /// Time at which v first equals `level` (0 if level >= v(0)).
  double time_to_reach(double level) const;
  /// Time at which v reaches 0; +inf if never.
  double zero_time() const;
  /// Integral of v_+ over [0, inf); +inf if divergent. Killed curves only.
  double exit_integral() const;

  std::span<const double> grid_s() const noexcept { return grid_s_; }
  std::span<const double> grid_v() const noexcept { return grid_v_; }

 private:
  friend BoundCurve solve_bound_curve(const ProfileFunction&, double, double, const CurveOptions&);

  double rate(double v) const;  // C^2 F(v)^2 with the floor applied
  double family_value(double start, double s) const;
  double family_time(double from, double to) const;
  double family_integral(double from, double to) const;
  double numeric_value(double s) const;
  double numeric_integral() const;

  ProfileFunction f_;
  double c_ = 0.0;
  double initial_ = 0.0;
  CurveForm form_ = CurveForm::Numeric;
  // closed form: phase one follows the family down to the floor, phase two
  // is linear with slope -floor_rate_
  double floor_time_ = kTransient;
  double floor_level_ = 0.0;
  double floor_rate_ = 0.0;
  // numeric
  std::vector<double> grid_s_, grid_v_, grid_dv_;
  bool grid_crosses_zero_ = false;
};

/// Closed form when F is a power or the identity (with or without floor),
/// numeric integration otherwise or when forced. `mass` = kTransient asks
/// for the curve started at +inf, which needs integrable 1/F^2 at infinity:
/// power d > 2, or identity with a floor. Throws TransientUnsupported.
BoundCurve solve_bound_curve(const ProfileFunction& f, double c, double mass, const CurveOptions& options = {});

/// 2 * int_0^inf v^A_+(s) ds.
double bound_exit(const BoundCurve& curve);

/// 2 * int_0^inf min(max(v, 0), m(A)) ds for the transient curve v.
double bound_occupation(const BoundCurve& curve, double mass);

enum class BoundKind { Exit, Occupation };

/// Explicit constants for the power and identity families:
///   exit, power:       d / C^2 * m^(2/d)
///   occupation, power: d^2 / (C^2 (d - 2)) * m^(2/d), d > 2
///   exit, id:          (1 + 2 ln(m / m_o)) / C^2
///   occupation, id:    (3 + 2 ln(m / m_o)) / C^2
/// Throws UnsupportedCombination otherwise.
double closed_form_bound(BoundKind kind, ProfileFunction::Kind family, double d, double c, double mass,
                         double root_mass);

/// int_a^b dx / F(x)^2 (floor applied); b may be +inf.
double inverse_square_integral(const ProfileFunction& f, double a, double b);

struct TransienceVerdict {
  bool finite = false;           // int_1^inf dx / F(x)^2 < inf
  double tail_integral = 0.0;    // that integral (+inf when divergent)
  std::optional<double> t0;      // uniform bound on the Green function
};

/// Summability test for 1/F^2 and, when it passes, the uniform time t0 after
/// which u(t) < inf_m for every region of measure at most `max_mass`.
TransienceVerdict transience_diagnostic(const ProfileFunction& f, double c, double inf_m,
                                        double max_mass = kTransient);

/// CSV "s,v,v_plus,v_plusA" on `points` evenly spaced s in [0, s_max].
void write_curve_csv(std::ostream& out, const BoundCurve& curve, double mass, double s_max, int points);

}  // namespace awlab
