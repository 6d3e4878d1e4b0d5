#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "awlab/graph.hpp"
#include "awlab/green.hpp"
#include "awlab/profile_function.hpp"

namespace awlab {

/// Linearized level-set volume
///   u(s) = sum_{x in A_s, y} mu(x,y) (G(x) - max{s, G(y)}) / (G(x) - G(y)),
/// stored exactly as a piecewise-linear, left-continuous function of s with
/// breakpoints at the distinct Green values (0 included). A pair with
/// G(y) >= G(x) contributes the full mu(x,y) while s <= G(x).
class LevelProfile {
 public:
  enum class Kind { Standard, Occupation };

  Kind kind() const noexcept { return kind_; }
  bool empty() const noexcept { return mass_ == 0.0; }

  /// b_0 = 0 < b_1 < ... < b_K = max G.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  /// u(b_k).
  std::span<const double> left_values() const noexcept { return left_; }
  /// u(b_k+).
  std::span<const double> right_values() const noexcept { return right_; }
  /// Slope on (b_k, b_{k+1}); one fewer entry than breakpoints.
  std::span<const double> slopes() const noexcept { return slopes_; }

  double value(double s) const;
  double right_limit(double s) const;
  /// Exact left derivative: -sum over boundary pairs of A_s of mu / (G(x) - G(y)).
  double left_derivative(double s) const;

  double mass() const noexcept { return mass_; }
  double top() const noexcept { return breakpoints_.back(); }
  /// Breakpoint-wise trapezoid of u over [0, top].
  double integral() const noexcept { return integral_; }
  /// sum_{x, y} mu(x,y) min{G(x), (G(x) + G(y)) / 2}.
  double closed_form_integral() const noexcept { return closed_form_; }

 private:
  friend LevelProfile make_profile(const WeightedGraph&, std::span<const double>, std::span<const Vertex>, Kind);

  std::size_t interval_of(double s) const;

  Kind kind_ = Kind::Standard;
  std::vector<double> breakpoints_{0.0};
  std::vector<double> left_{0.0};
  std::vector<double> right_{0.0};
  std::vector<double> slopes_;
  double mass_ = 0.0;
  double integral_ = 0.0;
  double closed_form_ = 0.0;
};

/// Profile over the sources `xs` using per-vertex `levels` (already snapped).
LevelProfile make_profile(const WeightedGraph& g, std::span<const double> levels, std::span<const Vertex> xs,
                          LevelProfile::Kind kind);

LevelProfile profile_u(const WeightedGraph& g, const GreenField& gf);

/// u~ for the occupation bound: sources restricted to A (x in A with
/// ambient G(x) >= s), neighbors valued by the ambient field. Throws
/// RegionNotContained unless A lies inside the ambient region.
LevelProfile profile_u_occupation(const WeightedGraph& g, const GreenField& ambient, const Region& a);

inline double left_derivative(const LevelProfile& lp, double s) { return lp.left_derivative(s); }

struct IntegralPair {
  double integral = 0.0;
  double closed_form = 0.0;
};

IntegralPair integral_u(const LevelProfile& lp);

struct FactorTwoReport {
  double exact = 0.0;           // sum m(x) G(x)
  double twice_integral = 0.0;  // 2 * int u
  double slack = 0.0;           // twice_integral - exact
  bool holds = false;
};

FactorTwoReport factor_two_check(const WeightedGraph& g, const GreenField& gf, const LevelProfile& lp);

struct EduViolation {
  double s = 0.0;
  bool right_limit = false;  // evaluated at s+ (start of the next linear piece)
  double u = 0.0;
  double derivative = 0.0;
  double required = 0.0;  // -(C F(u))^2
  double margin = 0.0;    // derivative - required; positive means violated
};

struct EduReport {
  std::size_t checked = 0;
  std::vector<EduViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks u' <= -(C F(u))^2 wherever u > 0: at each breakpoint's left limit
/// and at the right limit opening each linear piece, where u is largest on
/// the piece. `rel_tol` absorbs rounding in the comparison.
EduReport check_edu(const LevelProfile& lp, const ProfileFunction& f, double c, double rel_tol = 1e-9);

/// CSV "s,u,left_derivative" at the breakpoints.
void write_profile_csv(std::ostream& out, const LevelProfile& lp);

}  // namespace awlab
