#pragma once

#include "lshift/constants.hpp"
#include "lshift/hydrogen.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lshift {

//! Dipole transition from a source level to (target_n, target_l).
struct TransitionTerm {
  int target_n;
  int target_l;
  //! E_m - E_n in eV; negative for downward transitions.
  double energy;
  //! |p_mn|^2 / (mc)^2.
  double p_squared;
};

//! Thrown when a model is evaluated inside a resonance exclusion window.
class ResonanceError : public std::domain_error {
public:
  ResonanceError(const std::string &what, int target_n, int target_l, double energy)
      : std::domain_error(what), target_n_(target_n), target_l_(target_l),
        energy_(energy) {}
  int target_n() const { return target_n_; }
  int target_l() const { return target_l_; }
  double transition_energy() const { return energy_; }

private:
  int target_n_;
  int target_l_;
  double energy_;
};

//! Radial dipole integral int R_{n l} R_{n2 l2} r^3 dr in units of a0/Z
//! (Gordon's closed form). Requires |l - l2| = 1 and n != n2. Only the square
//! enters any rate, so the overall sign is left as the formula gives it.
double radial_dipole(int n, int l, int n2, int l2);

//! Absorption oscillator strength of 1S -> nP, closed form. n >= 2.
double oscillator_strength_1s_np(int n);

//! All bound dipole partners of `state` with principal number <= n_max.
std::vector<TransitionTerm> transition_terms(const HydrogenState &state, int n_max,
                                             const PhysicalConstants &c = codata2018());

//! f = 2 mc^2 |p|^2 / (3 (E_m - E_n) (mc)^2), signed (emission negative).
double oscillator_strength(const TransitionTerm &term,
                           const PhysicalConstants &c = codata2018());

//! Discrete Bethe density (2 alpha/3 pi) sum p^2 dE/(dE + E).
double bethe_density_discrete(double energy, const HydrogenState &state, int n_max,
                              const PhysicalConstants &c = codata2018());

//! Pure 1/E density (4 mc^2/3 pi) alpha (Z alpha)^4 / n^3 / E for S states,
//! zero otherwise.
double welton_density(double energy, const HydrogenState &state,
                      const PhysicalConstants &c = codata2018());

//! -(2 alpha/3 pi) sum p^2 dE E / (dE^2 - E^2). Throws ResonanceError when
//! |E - |dE|| <= resonance_width for any included transition.
double power_density(double energy, const HydrogenState &state, int n_max,
                     double resonance_width = 0.01,
                     const PhysicalConstants &c = codata2018());

//! Coefficient of 1/E in the large-E density: (4 mc^2/3 pi) alpha (Z alpha)^4 / n^3
//! for S states, 0 for l > 0.
double high_e_coefficient(const HydrogenState &state,
                          const PhysicalConstants &c = codata2018());
double high_e_asymptote(double energy, const HydrogenState &state,
                        const PhysicalConstants &c = codata2018());

//! (2 alpha/3 pi)(Z alpha)^2/n^2 - (alpha/pi mc^2) E.
double low_e_intercept(const HydrogenState &state, const PhysicalConstants &c = codata2018());
double low_e_slope(const PhysicalConstants &c = codata2018());
double low_e_asymptote(double energy, const HydrogenState &state,
                       const PhysicalConstants &c = codata2018());

//! Rational ground-state fit A (1 + e^{-B E}) / (E + C).
struct FitParameters {
  double a = 4.4008e-6;
  double b = 0.08445;
  double c = 106.79;
};
double fit_density(double energy, const FitParameters &p = {});

//! Bethe's approximate shift with mean excitation energy e_avg:
//! (4 mc^2/3 pi) alpha (Z alpha)^4 / n^3 ln(mc^2 / e_avg). S states only.
double bethe_log_shift(const HydrogenState &state, double e_avg,
                       const PhysicalConstants &c = codata2018());

//! sqrt((2 alpha/pi) (hbar/mc)^2 ln(e_high/e_low)) in fm. Throws
//! std::domain_error for e_low <= 0 (divergent) and std::invalid_argument for
//! e_high < e_low.
double rms_displacement(double e_low, double e_high,
                        const PhysicalConstants &c = codata2018());

//! |psi_{n00}(0)|^2 in Angstrom^-3; zero for l > 0.
double density_at_origin(const HydrogenState &state,
                         const PhysicalConstants &c = codata2018());

enum class SumRule { dipole, trk, momentum };
SumRule parse_sum_rule(std::string_view name);
std::string_view to_string(SumRule rule);

struct SumRuleReport {
  SumRule rule;
  double partial_sum;
  double target;
  int n_max;

  //! partial_sum / target, or 0 when the target vanishes.
  double completeness() const { return target != 0.0 ? partial_sum / target : 0.0; }
};

//! dipole: sum p^2 dE [eV] against 4 pi Z alpha (hbar c)^3 |psi(0)|^2 / (2 (mc^2)^2)
//! trk:    sum f against 1
//! momentum: sum p^2 against (Z alpha)^2 / n^2
SumRuleReport sum_rule_report(SumRule rule, const HydrogenState &state, int n_max,
                              const PhysicalConstants &c = codata2018());

} // namespace lshift
