#pragma once

#include "lshift/constants.hpp"

#include <string_view>
#include <vector>

namespace lshift {

enum class GridScale { linear, log };

GridScale parse_grid_scale(std::string_view name);
std::string_view to_string(GridScale scale);

//! Strictly increasing photon energies in (0, mc^2].
class EnergyGrid {
public:
  //! Validates monotonicity and range; throws std::invalid_argument.
  EnergyGrid(std::vector<double> points, GridScale scale,
             const PhysicalConstants &c = codata2018());

  const std::vector<double> &points() const { return points_; }
  GridScale scale() const { return scale_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

private:
  std::vector<double> points_;
  GridScale scale_;
};

//! Grid with exact endpoints and uniform spacing in E (linear) or ln E (log).
EnergyGrid make_grid(double e_min, double e_max, int count, GridScale scale,
                     const PhysicalConstants &c = codata2018());

} // namespace lshift
