#include "gna/grid.hpp"

#include <cmath>
#include <sstream>

#include "gna/errors.hpp"

namespace gna {

namespace {
constexpr std::size_t kMinGridLength = 8; // classifiers need a tail to fit

void check_values(const std::vector<double>& v) {
  if (v.size() < kMinGridLength) {
    std::ostringstream os;
    os << "grid length " << v.size() << " is below the minimum " << kMinGridLength;
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !(v[i] <= 1.0))
      throw ConfigError("grid values must lie in (0, 1]");
    if (i > 0 && !(v[i] < v[i - 1]))
      throw ConfigError("grid values must be strictly decreasing");
  }
}
} // namespace

EpsGrid::EpsGrid(GridKind kind, std::vector<double> values, long label_base, double ratio)
    : kind_(kind), values_(std::move(values)), label_base_(label_base), ratio_(ratio) {}

GridPtr EpsGrid::dyadic(long k_min, long k_max) { return geometric(0.5, k_min, k_max); }

GridPtr EpsGrid::geometric(double ratio, long k_min, long k_max) {
  if (!(ratio > 0.0) || !(ratio < 1.0))
    throw ConfigError("geometric grid ratio must lie in (0, 1)");
  if (k_min >= k_max) {
    std::ostringstream os;
    os << "grid range [" << k_min << ", " << k_max << "] is empty or a single point";
    throw ConfigError(os.str());
  }
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (long k = k_min; k <= k_max; ++k)
    vals.push_back(std::pow(ratio, static_cast<double>(k)));
  check_values(vals);
  GridKind kind = ratio == 0.5 ? GridKind::dyadic : GridKind::geometric;
  return GridPtr(new EpsGrid(kind, std::move(vals), k_min, ratio));
}

GridPtr EpsGrid::from_values(std::vector<double> values) {
  check_values(values);
  return GridPtr(new EpsGrid(GridKind::explicit_values, std::move(values), 0, 0.0));
}

GridPtr EpsGrid::default_grid() {
  static const GridPtr g = dyadic(4, 40);
  return g;
}

bool EpsGrid::same_as(const EpsGrid& other) const {
  if (this == &other) return true;
  return values_ == other.values_ && label_base_ == other.label_base_;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b) throw StructuralError("operand has no grid");
  if (!a->same_as(*b)) throw StructuralError("operands live on different grids");
}

} // namespace gna
