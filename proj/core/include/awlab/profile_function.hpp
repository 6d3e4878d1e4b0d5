#pragma once

#include <string>
#include <utility>
#include <vector>

namespace awlab {

/// Isoperimetric profile F. Positive and nondecreasing on (0, inf); when a
/// floor is set, F(x) = F(floor) for x <= floor (the floor is normally m(o)).
class ProfileFunction {
 public:
  enum class Kind { Power, Linear, Custom };

  /// F(x) = x^(1 - 1/d).
  static ProfileFunction power(double d, double floor = 0.0);
  /// F(x) = x.
  static ProfileFunction linear(double floor = 0.0);
  /// Piecewise-linear table of (x, F(x)) with x increasing and F positive,
  /// nondecreasing; constant outside the table range.
  static ProfileFunction custom(std::vector<std::pair<double, double>> table, double floor = 0.0);

  ProfileFunction with_floor(double floor) const;

  double operator()(double x) const { return raw(x < floor_ ? floor_ : x); }
  /// F without the floor convention.
  double raw(double x) const;

  Kind kind() const noexcept { return kind_; }
  double dimension() const noexcept { return dimension_; }
  double floor() const noexcept { return floor_; }
  bool floored() const noexcept { return floor_ > 0.0; }
  const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }

  /// "power:3", "id", "custom[4]", with "@floor" appended when floored.
  std::string describe() const;

 private:
  Kind kind_ = Kind::Linear;
  double dimension_ = 0.0;
  double floor_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

inline double eval_F(const ProfileFunction& f, double x) { return f(x); }

}  // namespace awlab
