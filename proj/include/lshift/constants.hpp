#pragma once

namespace lshift {

//! Physical constants in the eV / Angstrom / fm unit chain used throughout.
//! Defaults are CODATA 2018. `ground_binding` is kept as an independent field
//! so replication studies can substitute the rounded 13.6 eV value.
struct PhysicalConstants {
  double alpha = 7.2973525693e-3;       // fine-structure constant
  double mc2 = 510998.95000;            // electron rest energy [eV]
  double ground_binding = 13.605693122994; // |E_1| for Z = 1 [eV]
  double hbar_c = 1973.269804;          // [eV Angstrom]
  double hbar_over_mc = 386.15926796;   // reduced Compton wavelength [fm]

  //! Throws std::invalid_argument when the stored values are out of range or
  //! mutually inconsistent.
  void validate() const;
};

//! Largest accepted photon energy: mc^2, or the customary rounded 511 keV if
//! that is larger.
double energy_ceiling(const PhysicalConstants &c);

//! CODATA 2018 values.
const PhysicalConstants &codata2018();

} // namespace lshift
