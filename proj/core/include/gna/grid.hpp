#pragma once

#include <memory>
#include <vector>

namespace gna {

enum class GridKind { dyadic, geometric, explicit_values };

// Finite strictly decreasing sample of the regularization parameter in (0,1].
// Every net in one computation shares a grid; asymptotic statements are
// certified on its tail.  Grids are immutable and shared by pointer.
class EpsGrid {
public:
  // eps_k = 2^{-k} for k = k_min..k_max.
  static std::shared_ptr<const EpsGrid> dyadic(long k_min, long k_max);
  // eps_k = ratio^k for k = k_min..k_max, 0 < ratio < 1.
  static std::shared_ptr<const EpsGrid> geometric(double ratio, long k_min, long k_max);
  // User-supplied values; index labels are 0-based positions.
  static std::shared_ptr<const EpsGrid> from_values(std::vector<double> values);

  // The default working grid: dyadic k = 4..40.
  static std::shared_ptr<const EpsGrid> default_grid();

  GridKind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  double eps(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  // Index label seen by chi predicates: the exponent k for dyadic/geometric
  // grids, the 0-based position for explicit grids.
  long index_label(std::size_t i) const { return label_base_ + static_cast<long>(i); }

  long k_min() const { return label_base_; }
  long k_max() const { return label_base_ + static_cast<long>(values_.size()) - 1; }
  double ratio() const { return ratio_; }

  bool same_as(const EpsGrid& other) const;

private:
  EpsGrid(GridKind kind, std::vector<double> values, long label_base, double ratio);

  GridKind kind_;
  std::vector<double> values_;
  long label_base_;
  double ratio_; // 0 for explicit grids
};

using GridPtr = std::shared_ptr<const EpsGrid>;

// Throws StructuralError unless a and b are the same grid (by identity or value).
void require_same_grid(const GridPtr& a, const GridPtr& b);

} // namespace gna
