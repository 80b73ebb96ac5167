#include "lshift/constants.hpp"
#include "lshift/grid.hpp"
#include "lshift/hydrogen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lshift {

void PhysicalConstants::validate() const {
  if (!(alpha > 0.00729 && alpha < 0.00730))
    throw std::invalid_argument("alpha out of range: " + std::to_string(alpha));
  if (!(mc2 > 5.109e5 && mc2 < 5.111e5))
    throw std::invalid_argument("mc2 out of range: " + std::to_string(mc2));
  if (!(hbar_c > 0.0) || !(hbar_over_mc > 0.0))
    throw std::invalid_argument("hbar_c and hbar_over_mc must be positive");
  const double expected = 0.5 * mc2 * alpha * alpha;
  if (std::abs(ground_binding - expected) > 1e-3 * expected)
    throw std::invalid_argument("ground_binding inconsistent with mc2 alpha^2/2");
}

const PhysicalConstants &codata2018() {
  static const PhysicalConstants constants{};
  return constants;
}

double energy_ceiling(const PhysicalConstants &c) { return std::max(c.mc2, 5.11e5); }

//==============================================================================
HydrogenState::HydrogenState(int n, int l, int z) : n_(n), l_(l), z_(z) {
  if (n < 1)
    throw std::invalid_argument("principal quantum number must be >= 1");
  if (l < 0 || l > n - 1)
    throw std::invalid_argument("orbital quantum number must satisfy 0 <= l <= n-1");
  if (z < 1)
    throw std::invalid_argument("nuclear charge must be >= 1");
}

std::string HydrogenState::label() const {
  static constexpr char letters[] = "SPDFGHIKLMNOQRTUV";
  const char letter = l_ < static_cast<int>(sizeof(letters)) - 1 ? letters[l_] : '?';
  return std::to_string(n_) + letter;
}

namespace {
double level_magnitude(const HydrogenState &s, const PhysicalConstants &c) {
  const double z = s.z();
  const double n = s.n();
  return c.ground_binding * z * z / (n * n);
}
} // namespace

double binding_energy(const HydrogenState &state, const PhysicalConstants &c) {
  return -level_magnitude(state, c);
}

double phi_of_energy(double energy, const HydrogenState &state,
                     const PhysicalConstants &c) {
  if (!(energy >= 0.0))
    throw std::domain_error("photon energy must be non-negative");
  return 0.5 * std::log1p(energy / level_magnitude(state, c));
}

double energy_of_phi(double phi, const HydrogenState &state,
                     const PhysicalConstants &c) {
  return level_magnitude(state, c) * std::expm1(2.0 * phi);
}

double denergy_dphi(double phi, const HydrogenState &state,
                    const PhysicalConstants &c) {
  return 2.0 * level_magnitude(state, c) * std::exp(2.0 * phi);
}

double phi_cutoff(const HydrogenState &state, const PhysicalConstants &c) {
  const double za = state.z() * c.alpha;
  const double n = state.n();
  return 0.5 * std::log1p(2.0 * n * n / (za * za));
}

//==============================================================================
GridScale parse_grid_scale(std::string_view name) {
  if (name == "linear" || name == "lin")
    return GridScale::linear;
  if (name == "log")
    return GridScale::log;
  throw std::invalid_argument("unknown grid scale '" + std::string(name) + "'");
}

std::string_view to_string(GridScale scale) {
  return scale == GridScale::linear ? "linear" : "log";
}

EnergyGrid::EnergyGrid(std::vector<double> points, GridScale scale,
                       const PhysicalConstants &c)
    : points_(std::move(points)), scale_(scale) {
  if (points_.empty())
    throw std::invalid_argument("energy grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double e = points_[i];
    if (!(e > 0.0) || e > energy_ceiling(c))
      throw std::invalid_argument("grid energy outside (0, mc^2]: " + std::to_string(e));
    if (i > 0 && !(e > points_[i - 1]))
      throw std::invalid_argument("grid energies must be strictly increasing");
  }
}

EnergyGrid make_grid(double e_min, double e_max, int count, GridScale scale,
                     const PhysicalConstants &c) {
  if (count < 2)
    throw std::invalid_argument("grid needs at least two points");
  if (!(e_min > 0.0))
    throw std::invalid_argument("grid lower bound must be positive");
  if (!(e_min < e_max))
    throw std::invalid_argument("grid bounds are inverted");
  if (e_max > energy_ceiling(c))
    throw std::invalid_argument("grid upper bound exceeds mc^2");

  std::vector<double> points(static_cast<std::size_t>(count));
  const double last = count - 1;
  if (scale == GridScale::linear) {
    const double step = (e_max - e_min) / last;
    for (int i = 0; i < count; ++i)
      points[i] = e_min + step * i;
  } else {
    const double lo = std::log(e_min);
    const double step = (std::log(e_max) - lo) / last;
    for (int i = 0; i < count; ++i)
      points[i] = std::exp(lo + step * i);
  }
  points.front() = e_min;
  points.back() = e_max;
  return EnergyGrid(std::move(points), scale, c);
}

} // namespace lshift
