#include "awlab/profile_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "awlab/error.hpp"

namespace awlab {

ProfileFunction ProfileFunction::power(double d, double floor) {
  if (!(d >= 1.0)) throw Error(Errc::InvalidArgument, "power profile needs d >= 1");
  ProfileFunction f;
  f.kind_ = Kind::Power;
  f.dimension_ = d;
  return f.with_floor(floor);
}

ProfileFunction ProfileFunction::linear(double floor) {
  ProfileFunction f;
  f.kind_ = Kind::Linear;
  return f.with_floor(floor);
}

ProfileFunction ProfileFunction::custom(std::vector<std::pair<double, double>> table, double floor) {
  if (table.empty()) throw Error(Errc::InvalidArgument, "custom profile needs a nonempty table");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!(table[i].second > 0.0)) throw Error(Errc::InvalidArgument, "custom profile values must be positive");
    if (i > 0 && (!(table[i].first > table[i - 1].first) || table[i].second < table[i - 1].second))
      throw Error(Errc::InvalidArgument, "custom profile table must be increasing in x and nondecreasing in F");
  }
  ProfileFunction f;
  f.kind_ = Kind::Custom;
  f.table_ = std::move(table);
  return f.with_floor(floor);
}

ProfileFunction ProfileFunction::with_floor(double floor) const {
  if (!(floor >= 0.0)) throw Error(Errc::InvalidArgument, "floor must be nonnegative");
  ProfileFunction f = *this;
  f.floor_ = floor;
  return f;
}

double ProfileFunction::raw(double x) const {
  switch (kind_) {
    case Kind::Power:
      return std::pow(x, 1.0 - 1.0 / dimension_);
    case Kind::Linear:
      return x;
    case Kind::Custom: {
      if (x <= table_.front().first) return table_.front().second;
      if (x >= table_.back().first) return table_.back().second;
      auto it = std::upper_bound(table_.begin(), table_.end(), x,
                                 [](double v, const std::pair<double, double>& p) { return v < p.first; });
      const auto& [x1, y1] = *it;
      const auto& [x0, y0] = *(it - 1);
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

std::string ProfileFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Power: os << "power:" << dimension_; break;
    case Kind::Linear: os << "id"; break;
    case Kind::Custom: os << "custom[" << table_.size() << "]"; break;
  }
  if (floored()) os << "@" << floor_;
  return os.str();
}

}  // namespace awlab
