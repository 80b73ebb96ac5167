#pragma once

#include "lshift/constants.hpp"
#include "lshift/grid.hpp"
#include "lshift/hydrogen.hpp"
#include "lshift/kernel.hpp"
#include "lshift/quadrature.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lshift {

//! Numerical conditions attached to a result.
enum class Flag : unsigned {
  max_subdivisions = 1u << 0,     // panel budget exhausted before tolerance
  divergent = 1u << 1,            // integral does not exist in the chosen mode
  resonance = 1u << 2,            // evaluated on or next to a pole
  low_energy_asymptote = 1u << 3, // value taken from the low-energy closed form
  precision_loss = 1u << 4,       // cancellation in the continued tail
  non_finite = 1u << 5,
};

class FlagSet {
public:
  constexpr FlagSet() = default;
  constexpr FlagSet(Flag f) : bits_(static_cast<unsigned>(f)) {} // NOLINT

  constexpr bool has(Flag f) const { return (bits_ & static_cast<unsigned>(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned bits() const { return bits_; }
  //! True for anything but informational flags.
  constexpr bool is_failure() const {
    return (bits_ & ~static_cast<unsigned>(Flag::low_energy_asymptote)) != 0;
  }

  constexpr FlagSet &operator|=(FlagSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr FlagSet operator|(FlagSet a, FlagSet b) { return a |= b; }
  friend constexpr bool operator==(FlagSet, FlagSet) = default;

  //! "ok" or names joined with '|'.
  std::string to_string() const;

private:
  unsigned bits_ = 0;
};

enum class LowEnergyMode {
  //! Analytic continuation of the s-integral below the first downward
  //! threshold; exact where the integral converges.
  continuation,
  //! Replace the density below the threshold by the low-energy closed form.
  asymptote,
};

LowEnergyMode parse_low_energy_mode(std::string_view name);
std::string_view to_string(LowEnergyMode mode);

enum class Model { gt, bethe, welton, power, fit, asymptote, low_asymptote };

Model parse_model(std::string_view name);
std::string_view to_string(Model model);

struct EngineConfig {
  PhysicalConstants constants = codata2018();
  QuadratureConfig quadrature;
  LowEnergyMode low_energy_mode = LowEnergyMode::continuation;
  //! Energy below which the low-energy mode applies; defaults to the first
  //! downward threshold (n^2 - 1)|E_n| of the state (10.2 eV for 2S).
  std::optional<double> seam_threshold;
  //! Upper principal number of the discrete sums in bethe/power.
  int n_max = 40;
  //! Power-model exclusion half-width around each resonance [eV].
  double resonance_width = 0.01;
  //! Worker threads for curves; 0 picks the hardware concurrency.
  int threads = 0;

  void validate() const;
};

//! Lowest energy at which a downward transition opens, (n^2-1)|E_n|; zero for n = 1.
double downward_threshold(const HydrogenState &state, const PhysicalConstants &c);
double seam_threshold(const HydrogenState &state, const EngineConfig &config);

struct SIntegral {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  FlagSet flags;
};

//! Inner integral over s at fixed phi, by adaptive quadrature on [0, s0]
//! and the closed-form sum of the e^{-s} tail series beyond s0. For nu > 1
//! the tail sum is the analytic continuation of the divergent integral.
SIntegral s_integral(const LevelKernel::Slice &slice, const EngineConfig &config);
SIntegral s_integral(double phi, const HydrogenState &state, const EngineConfig &config);

//! Prefactor of the double integral, 4 mc^2 alpha (Z alpha)^4 / (3 pi N^4) [eV].
double shift_prefactor(const HydrogenState &state, const PhysicalConstants &c);

struct DensityPoint {
  double energy = 0.0;
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  FlagSet flags;
};

//! dDeltaE/dE at photon energy E (dimensionless).
DensityPoint spectral_density(double energy, const HydrogenState &state,
                              const EngineConfig &config);

struct SeamReport {
  double threshold = 0.0;
  double continued = 0.0;
  double asymptote = 0.0;
  //! (asymptote - continued) / |continued|.
  double relative_mismatch = 0.0;
};

//! Both low-energy treatments at the seam threshold.
SeamReport low_energy_seam(const HydrogenState &state, const EngineConfig &config);

struct ShiftResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long integrand_evaluations = 0;
  FlagSet flags;
};

//! Shift contributed by photon energies in [e_min, e_max], integrating in phi.
//! Poles of the continued density (n > 1) are integrated as principal values.
ShiftResult total_shift(const HydrogenState &state, double e_min, double e_max,
                        const EngineConfig &config);

//! Same quantity integrating the dE-density over ln E; a change-of-variable check.
ShiftResult total_shift_by_energy(const HydrogenState &state, double e_min, double e_max,
                                  const EngineConfig &config);

struct SpectralSample {
  double energy;
  double density;
  FlagSet flags;
};

struct SpectralCurve {
  HydrogenState state;
  Model model;
  std::vector<SpectralSample> samples;
};

//! Evaluates `model` at every grid point, in parallel when configured; the
//! result is independent of the thread count.
SpectralCurve density_curve(const EnergyGrid &grid, const HydrogenState &state, Model model,
                            const EngineConfig &config);

//! One model evaluated at one energy; errors become flags and NaN.
SpectralSample model_density(double energy, const HydrogenState &state, Model model,
                             const EngineConfig &config);

inline constexpr double kDefaultLowCutoff = 5.4e-7;

struct FractionSample {
  double energy;
  double fraction;
  FlagSet flags;
};

struct FractionCurve {
  HydrogenState state;
  double e_min;
  ShiftResult total;
  std::vector<FractionSample> samples;
};

//! Cumulative share of the shift from [e_min, E], normalized by the total
//! over [e_min, mc^2].
FractionCurve fraction_curve(const HydrogenState &state, const EnergyGrid &grid,
                             const EngineConfig &config, double e_min = kDefaultLowCutoff);

} // namespace lshift
