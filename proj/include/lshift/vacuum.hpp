#pragma once

#include "lshift/engine.hpp"

namespace lshift {

//! Free-field spectral energy density E^3 / (2 pi^2 (hbar c)^3), in
//! eV per (eV Angstrom^3). Throws std::domain_error for E <= 0.
double vacuum_energy_density(double energy, const PhysicalConstants &c = codata2018());

struct VolumeSample {
  double energy; // eV
  double volume; // Angstrom^3
  double radius; // Angstrom, radius of the sphere with this volume
  FlagSet flags;
};

//! Volume of free vacuum field whose energy density at E equals the shift
//! density: spectral_density / vacuum_energy_density. Throws
//! std::domain_error when the density is not positive.
VolumeSample spectral_volume(double energy, const HydrogenState &state,
                             const EngineConfig &config);

//! Sphere radius of a given volume; throws std::domain_error when negative.
double sphere_radius(double volume);

} // namespace lshift
