#include "lshift/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lshift {

namespace {

using std::numbers::pi;

constexpr int kMaxPartner = 500;

// (Z alpha)^2 expressed through the ground-state binding so that the
// rounded-binding knob reaches every model.
double zalpha_sq(const HydrogenState &state, const PhysicalConstants &c) {
  return 2.0 * c.ground_binding * state.z() * state.z() / c.mc2;
}

// Terminating 2F1(a, b; c; x) with a or b a non-positive integer.
long double hyp2f1_terminating(int a, int b, int c, long double x) {
  const int terms = std::min(-a, -b);
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 0; k < terms; ++k) {
    term *= static_cast<long double>(a + k) * (b + k) / ((c + k) * (k + 1.0L)) * x;
    sum += term;
  }
  return sum;
}

// int R_{n l} R_{n2, l-1} r^3 dr for l >= 1, n != n2, in a0/Z.
double gordon(int n, int l, int n2) {
  const int nr = n - l - 1;
  const int n2r = n2 - l;
  const long double diff = static_cast<long double>(n) - n2;
  const long double sum = static_cast<long double>(n) + n2;
  const long double x = -4.0L * n * n2 / (diff * diff);
  const long double f1 = hyp2f1_terminating(-nr, -n2r, 2 * l, x);
  const long double f2 = hyp2f1_terminating(-nr - 2, -n2r, 2 * l, x);
  const long double bracket = f1 - (diff / sum) * (diff / sum) * f2;

  const int power = n + n2 - 2 * l - 2;
  const long double log_mag =
      -std::log(4.0L) - std::lgamma(2.0L * l) +
      0.5L * (std::lgamma(n + l + 1.0L) + std::lgamma(n2 + l + 0.0L) -
              std::lgamma(n - l + 0.0L) - std::lgamma(n2 - l + 1.0L)) +
      (l + 1) * std::log(4.0L * n * n2) + power * std::log(std::fabs(diff)) -
      (n + n2) * std::log(sum);
  double sign = ((n2 - l) % 2 == 0) ? 1.0 : -1.0;
  if (diff < 0 && power % 2 != 0)
    sign = -sign;
  return sign * static_cast<double>(std::exp(log_mag) * bracket);
}

void check_energy(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw std::domain_error("photon energy must be finite and > 0");
}

void check_n_max(int n_max) {
  if (n_max < 2 || n_max > kMaxPartner)
    throw std::invalid_argument("n_max must lie in [2, " + std::to_string(kMaxPartner) + "]");
}

} // namespace

double radial_dipole(int n, int l, int n2, int l2) {
  if (n < 1 || n2 < 1 || l < 0 || l2 < 0 || l >= n || l2 >= n2)
    throw std::invalid_argument("invalid hydrogenic quantum numbers");
  if (std::abs(l - l2) != 1)
    throw std::invalid_argument("dipole selection requires |l - l2| = 1");
  if (n == n2)
    throw std::invalid_argument("radial_dipole requires n != n2");
  return l2 == l - 1 ? gordon(n, l, n2) : gordon(n2, l2, n);
}

double oscillator_strength_1s_np(int n) {
  if (n < 2)
    throw std::invalid_argument("1S -> nP requires n >= 2");
  const double log_f = 8.0 * std::log(2.0) + 5.0 * std::log(n) +
                       (2.0 * n - 4.0) * std::log(n - 1.0) - std::log(3.0) -
                       (2.0 * n + 4.0) * std::log(n + 1.0);
  return std::exp(log_f);
}

std::vector<TransitionTerm> transition_terms(const HydrogenState &state, int n_max,
                                             const PhysicalConstants &c) {
  check_n_max(n_max);
  const int n = state.n();
  const int l = state.l();
  const double z = state.z();
  std::vector<TransitionTerm> out;
  for (int m = 1; m <= n_max; ++m) {
    if (m == n)
      continue;
    const double gap = 1.0 / (double(n) * n) - 1.0 / (double(m) * m);
    const double de = c.ground_binding * z * z * gap;
    const double scale = c.ground_binding * z * gap / (c.alpha * c.mc2);
    for (int l2 : {l - 1, l + 1}) {
      if (l2 < 0 || l2 >= m)
        continue;
      const double r = radial_dipole(n, l, m, l2);
      const double angular = std::max(l, l2) / (2.0 * l + 1.0);
      out.push_back(TransitionTerm{m, l2, de, scale * scale * angular * r * r});
    }
  }
  return out;
}

double oscillator_strength(const TransitionTerm &term, const PhysicalConstants &c) {
  return 2.0 * c.mc2 * term.p_squared / (3.0 * term.energy);
}

double bethe_density_discrete(double energy, const HydrogenState &state, int n_max,
                              const PhysicalConstants &c) {
  check_energy(energy);
  double sum = 0.0;
  for (const auto &t : transition_terms(state, n_max, c)) {
    const double denom = t.energy + energy;
    if (std::abs(denom) <= 1e-12 * std::abs(t.energy))
      throw ResonanceError("Bethe density evaluated on the " + state.label() + " -> " +
                               HydrogenState(t.target_n, t.target_l).label() + " pole",
                           t.target_n, t.target_l, t.energy);
    sum += t.p_squared * t.energy / denom;
  }
  return 2.0 * c.alpha / (3.0 * pi) * sum;
}

double welton_density(double energy, const HydrogenState &state, const PhysicalConstants &c) {
  check_energy(energy);
  return high_e_coefficient(state, c) / energy;
}

double power_density(double energy, const HydrogenState &state, int n_max,
                     double resonance_width, const PhysicalConstants &c) {
  check_energy(energy);
  if (!(resonance_width >= 0.0))
    throw std::invalid_argument("resonance width must be >= 0");
  double sum = 0.0;
  for (const auto &t : transition_terms(state, n_max, c)) {
    if (std::abs(energy - std::abs(t.energy)) <= resonance_width)
      throw ResonanceError("Power density within " + std::to_string(resonance_width) +
                               " eV of the " + state.label() + " -> " +
                               HydrogenState(t.target_n, t.target_l).label() +
                               " resonance at " + std::to_string(std::abs(t.energy)) + " eV",
                           t.target_n, t.target_l, t.energy);
    sum += t.p_squared * t.energy * energy / ((t.energy - energy) * (t.energy + energy));
  }
  return -2.0 * c.alpha / (3.0 * pi) * sum;
}

double high_e_coefficient(const HydrogenState &state, const PhysicalConstants &c) {
  if (!state.is_s_state())
    return 0.0;
  const double za2 = zalpha_sq(state, c);
  const double n3 = double(state.n()) * state.n() * state.n();
  return 4.0 * c.mc2 / (3.0 * pi) * c.alpha * za2 * za2 / n3;
}

double high_e_asymptote(double energy, const HydrogenState &state, const PhysicalConstants &c) {
  check_energy(energy);
  return high_e_coefficient(state, c) / energy;
}

double low_e_intercept(const HydrogenState &state, const PhysicalConstants &c) {
  return 2.0 * c.alpha / (3.0 * pi) * zalpha_sq(state, c) / (double(state.n()) * state.n());
}

double low_e_slope(const PhysicalConstants &c) { return -c.alpha / (pi * c.mc2); }

double low_e_asymptote(double energy, const HydrogenState &state, const PhysicalConstants &c) {
  if (!(energy >= 0.0))
    throw std::domain_error("photon energy must be >= 0");
  return low_e_intercept(state, c) + low_e_slope(c) * energy;
}

double fit_density(double energy, const FitParameters &p) {
  if (!(energy >= 0.0))
    throw std::domain_error("photon energy must be >= 0");
  return p.a * (1.0 + std::exp(-p.b * energy)) / (energy + p.c);
}

double bethe_log_shift(const HydrogenState &state, double e_avg, const PhysicalConstants &c) {
  if (!state.is_s_state())
    throw std::invalid_argument("Bethe-log shift is implemented for S states only");
  if (!(e_avg > 0.0))
    throw std::domain_error("mean excitation energy must be > 0");
  return high_e_coefficient(state, c) * std::log(c.mc2 / e_avg);
}

double rms_displacement(double e_low, double e_high, const PhysicalConstants &c) {
  if (!(e_low > 0.0))
    throw std::domain_error("rms displacement diverges for a lower limit <= 0");
  if (e_high < e_low)
    throw std::invalid_argument("require e_high >= e_low");
  const double r = c.hbar_over_mc;
  return std::sqrt(2.0 * c.alpha / pi * r * r * std::log(e_high / e_low));
}

double density_at_origin(const HydrogenState &state, const PhysicalConstants &c) {
  if (!state.is_s_state())
    return 0.0;
  const double bohr = c.hbar_c / (c.alpha * c.mc2);
  const double k = state.z() / (state.n() * bohr);
  return k * k * k / pi;
}

SumRule parse_sum_rule(std::string_view name) {
  if (name == "dipole")
    return SumRule::dipole;
  if (name == "trk")
    return SumRule::trk;
  if (name == "momentum")
    return SumRule::momentum;
  throw std::invalid_argument("unknown sum rule '" + std::string(name) + "'");
}

std::string_view to_string(SumRule rule) {
  switch (rule) {
  case SumRule::dipole:
    return "dipole";
  case SumRule::trk:
    return "trk";
  case SumRule::momentum:
    return "momentum";
  }
  return "?";
}

SumRuleReport sum_rule_report(SumRule rule, const HydrogenState &state, int n_max,
                              const PhysicalConstants &c) {
  const auto terms = transition_terms(state, n_max, c);
  double partial = 0.0;
  double target = 0.0;
  switch (rule) {
  case SumRule::dipole:
    for (const auto &t : terms)
      partial += t.p_squared * t.energy;
    target = 4.0 * pi * state.z() * c.alpha * std::pow(c.hbar_c, 3) *
             density_at_origin(state, c) / (2.0 * c.mc2 * c.mc2);
    break;
  case SumRule::trk:
    for (const auto &t : terms)
      partial += oscillator_strength(t, c);
    target = 1.0;
    break;
  case SumRule::momentum:
    for (const auto &t : terms)
      partial += t.p_squared;
    target = zalpha_sq(state, c) / (double(state.n()) * state.n());
    break;
  }
  return SumRuleReport{rule, partial, target, n_max};
}

} // namespace lshift
