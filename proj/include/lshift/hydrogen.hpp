#pragma once

#include "lshift/constants.hpp"

#include <string>

namespace lshift {

//! Hydrogenic level (n, l) with nuclear charge z.
class HydrogenState {
public:
  //! Throws std::invalid_argument unless n >= 1, 0 <= l <= n-1, z >= 1.
  HydrogenState(int n, int l, int z = 1);

  int n() const { return n_; }
  int l() const { return l_; }
  int z() const { return z_; }

  bool is_s_state() const { return l_ == 0; }

  //! Spectroscopic label, e.g. "1S", "2P", "3D".
  std::string label() const;

  friend bool operator==(const HydrogenState &, const HydrogenState &) = default;

private:
  int n_;
  int l_;
  int z_;
};

//! E_n = -mc^2 (Z alpha)^2 / 2n^2, expressed through `ground_binding` so the
//! 13.6 eV knob propagates consistently. Negative, in eV.
double binding_energy(const HydrogenState &state,
                      const PhysicalConstants &c = codata2018());

//! phi = 1/2 ln(1 + E/|E_n|). Throws std::domain_error for E < 0.
double phi_of_energy(double energy, const HydrogenState &state,
                     const PhysicalConstants &c = codata2018());

//! Inverse of phi_of_energy: E = |E_n| (e^{2 phi} - 1).
double energy_of_phi(double phi, const HydrogenState &state,
                     const PhysicalConstants &c = codata2018());

//! Jacobian dE/dphi = 2 |E_n| e^{2 phi}.
double denergy_dphi(double phi, const HydrogenState &state,
                    const PhysicalConstants &c = codata2018());

//! Upper integration limit in phi for a photon-energy cutoff of mc^2:
//! 1/2 ln(1 + 2n^2/(Z alpha)^2).
double phi_cutoff(const HydrogenState &state,
                  const PhysicalConstants &c = codata2018());

} // namespace lshift
