#include "lshift/vacuum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lshift {

double vacuum_energy_density(double energy, const PhysicalConstants &c) {
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw std::domain_error("photon energy must be finite and > 0");
  const double k = energy / c.hbar_c;
  return k * k * k / (2.0 * std::numbers::pi * std::numbers::pi);
}

double sphere_radius(double volume) {
  if (!(volume >= 0.0))
    throw std::domain_error("volume must be >= 0");
  return std::cbrt(3.0 * volume / (4.0 * std::numbers::pi));
}

VolumeSample spectral_volume(double energy, const HydrogenState &state,
                             const EngineConfig &config) {
  const auto d = spectral_density(energy, state, config);
  if (!(d.value > 0.0))
    throw std::domain_error("spectral volume needs a positive density (got " +
                            std::to_string(d.value) + " for " + state.label() + ")");
  const double volume = d.value / vacuum_energy_density(energy, config.constants);
  return VolumeSample{energy, volume, sphere_radius(volume), d.flags};
}

} // namespace lshift
