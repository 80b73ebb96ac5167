#include "lshift/engine.hpp"
#include "lshift/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lshift;

namespace {

const HydrogenState k1S(1, 0), k2S(2, 0), k2P(2, 1);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Normalised hydrogen radial function in units of a0.
double radial_wave(int n, int l, double r) {
  const double x = 2.0 * r / n;
  const double norm = std::sqrt(std::pow(2.0 / n, 3) * std::tgamma(n - l) /
                                (2.0 * n * std::tgamma(n + l + 1.0)));
  return norm * std::exp(-x / 2) * std::pow(x, l) * std::assoc_laguerre(n - l - 1, 2 * l + 1, x);
}

double radial_by_simpson(int n, int l, int n2, int l2) {
  const double r_max = 40.0 * std::max(n, n2) * std::max(n, n2) + 60.0;
  const int intervals = 200000;
  const double h = r_max / intervals;
  double sum = 0.0;
  for (int i = 1; i < intervals; ++i) {
    const double r = i * h;
    sum += (i % 2 ? 4.0 : 2.0) * radial_wave(n, l, r) * radial_wave(n2, l2, r) * r * r * r;
  }
  return h * sum / 3.0;
}

} // namespace

TEST(RadialDipole, MatchesLaguerreQuadrature) {
  const int cases[][4] = {{1, 0, 2, 1}, {1, 0, 3, 1}, {2, 0, 3, 1}, {2, 1, 3, 2}, {2, 1, 3, 0},
                          {3, 2, 4, 1}, {2, 1, 5, 2}, {4, 3, 5, 2}, {3, 1, 6, 0}, {2, 0, 7, 1}};
  for (const auto &c : cases) {
    const double g = radial_dipole(c[0], c[1], c[2], c[3]);
    const double o = radial_by_simpson(c[0], c[1], c[2], c[3]);
    EXPECT_NEAR(std::abs(g), std::abs(o), 1e-9 * std::max(1.0, std::abs(o)))
        << c[0] << c[1] << "->" << c[2] << c[3];
  }
}

TEST(RadialDipole, SymmetricAndValidated) {
  EXPECT_DOUBLE_EQ(std::abs(radial_dipole(1, 0, 2, 1)), std::abs(radial_dipole(2, 1, 1, 0)));
  EXPECT_NEAR(std::abs(radial_dipole(1, 0, 2, 1)), 128.0 * std::sqrt(6.0) / 243.0, 1e-13);
  EXPECT_THROW(radial_dipole(1, 0, 2, 0), std::invalid_argument);
  EXPECT_THROW(radial_dipole(2, 1, 2, 0), std::invalid_argument);
  EXPECT_THROW(radial_dipole(1, 1, 2, 0), std::invalid_argument);
}

TEST(OscillatorStrength, LymanValues) {
  EXPECT_NEAR(oscillator_strength_1s_np(2), 0.4162, 5e-5);
  EXPECT_NEAR(oscillator_strength_1s_np(3), 0.0791, 5e-5);
  EXPECT_THROW(oscillator_strength_1s_np(1), std::invalid_argument);
}

TEST(OscillatorStrength, GordonRouteMatchesClosedForm) {
  const auto terms = transition_terms(k1S, 60);
  ASSERT_EQ(terms.size(), 59u);
  for (const auto &t : terms) {
    EXPECT_EQ(t.target_l, 1);
    EXPECT_GT(t.energy, 0.0);
    EXPECT_LE(rel(oscillator_strength(t), oscillator_strength_1s_np(t.target_n)), 1e-10)
        << t.target_n;
  }
}

TEST(OscillatorStrength, EmissionNegative) {
  for (const auto &t : transition_terms(k2P, 10)) {
    if (t.target_n == 1) {
      EXPECT_LT(t.energy, 0.0);
      EXPECT_LT(oscillator_strength(t), 0.0);
    }
  }
}

TEST(SumRules, TrkPartialSums) {
  const auto r20 = sum_rule_report(SumRule::trk, k1S, 20);
  EXPECT_NEAR(r20.partial_sum, 0.564, 1.5e-3);
  EXPECT_DOUBLE_EQ(r20.target, 1.0);
  double last = 0.0;
  for (int n : {2, 5, 10, 40, 200}) {
    const auto r = sum_rule_report(SumRule::trk, k1S, n);
    EXPECT_GT(r.partial_sum, last);
    EXPECT_LT(r.partial_sum, 0.566);
    last = r.partial_sum;
  }
}

TEST(SumRules, BoundedByTargetsAndDipoleVanishesForP) {
  for (const auto &st : {k1S, k2S}) {
    const auto m = sum_rule_report(SumRule::momentum, st, 100);
    EXPECT_LT(m.completeness(), 1.0);
    EXPECT_GT(m.completeness(), 0.0);
    const auto d = sum_rule_report(SumRule::dipole, st, 100);
    EXPECT_LT(d.completeness(), 1.0);
    EXPECT_GT(d.completeness(), 0.0);
  }
  const auto p = sum_rule_report(SumRule::dipole, k2P, 50);
  EXPECT_EQ(p.target, 0.0);
  EXPECT_EQ(p.completeness(), 0.0);
  EXPECT_EQ(parse_sum_rule("trk"), SumRule::trk);
  EXPECT_THROW(parse_sum_rule("sigma"), std::invalid_argument);
}

TEST(Bethe, PositiveDecreasingAndBelowFullDensity) {
  EngineConfig cfg;
  double last = INFINITY;
  for (double e : {1e-4, 0.1, 5.0, 50.0, 500.0, 5e3, 5e4, 5e5}) {
    const double b = bethe_density_discrete(e, k1S, 40);
    EXPECT_GT(b, 0.0);
    EXPECT_LT(b, last);
    EXPECT_LT(b, spectral_density(e, k1S, cfg).value);
    EXPECT_GT(bethe_density_discrete(e, k1S, 80), b);
    last = b;
  }
}

TEST(Welton, CoefficientAndScaling) {
  EXPECT_NEAR(high_e_coefficient(k1S), 4.488e-6, 0.005 * 4.488e-6);
  EXPECT_NEAR(high_e_coefficient(k2S), high_e_coefficient(k1S) / 8, 1e-20);
  EXPECT_EQ(high_e_coefficient(k2P), 0.0);
  EXPECT_DOUBLE_EQ(welton_density(2.0, k1S), high_e_coefficient(k1S) / 2.0);
  EXPECT_THROW(welton_density(0.0, k1S), std::domain_error);
}

TEST(Power, ResonanceRaised) {
  const double lyman_alpha = 0.75 * codata2018().ground_binding;
  try {
    power_density(lyman_alpha + 0.005, k1S, 40);
    FAIL() << "expected ResonanceError";
  } catch (const ResonanceError &e) {
    EXPECT_EQ(e.target_n(), 2);
    EXPECT_EQ(e.target_l(), 1);
    EXPECT_NEAR(e.transition_energy(), lyman_alpha, 1e-9);
  }
  EXPECT_NO_THROW(power_density(lyman_alpha + 0.02, k1S, 40));
  EXPECT_THROW(power_density(lyman_alpha + 0.02, k1S, 40, 0.05), ResonanceError);
  EXPECT_THROW(power_density(1.0, k1S, 40, -1.0), std::invalid_argument);
}

TEST(Power, LowAndHighEnergyLimits) {
  const auto &c = codata2018();
  double trk_weighted = 0.0, inverse = 0.0;
  for (const auto &t : transition_terms(k1S, 40)) {
    trk_weighted += t.p_squared * t.energy;
    inverse += t.p_squared / t.energy;
  }
  const double k = 2 * c.alpha / (3 * std::numbers::pi);
  const double e_low = 1e-4;
  EXPECT_LE(rel(power_density(e_low, k1S, 40), -k * inverse * e_low), 1e-6);
  const double e_high = 5e5;
  EXPECT_LE(rel(power_density(e_high, k1S, 40), k * trk_weighted / e_high), 1e-6);
}

TEST(Asymptotes, GroundStateEndpoints) {
  EngineConfig cfg;
  EXPECT_LE(rel(spectral_density(1e-5, k1S, cfg).value, low_e_asymptote(1e-5, k1S)), 1e-4);
  EXPECT_LE(rel(spectral_density(5e5, k1S, cfg).value, high_e_asymptote(5e5, k1S)), 0.1);
  EXPECT_LT(low_e_slope(), 0.0);
  EXPECT_NEAR(low_e_intercept(k2S), low_e_intercept(k1S) / 4, 1e-22);
  EXPECT_THROW(high_e_asymptote(0.0, k1S), std::domain_error);
}

TEST(Fit, Limits) {
  const FitParameters p;
  EXPECT_DOUBLE_EQ(fit_density(0.0), 2 * p.a / p.c);
  EXPECT_LE(rel(fit_density(1e9) * 1e9, p.a), 1e-6);
  EXPECT_THROW(fit_density(-1.0), std::domain_error);
  double last = INFINITY;
  for (double e = 1e-3; e < 1e6; e *= 3) {
    EXPECT_LT(fit_density(e), last);
    last = fit_density(e);
  }
}

TEST(Estimates, BetheLogarithm) {
  const auto &c = codata2018();
  const double e_avg = 19.77 * c.ground_binding;
  const double shift = bethe_log_shift(k1S, e_avg);
  EXPECT_NEAR(shift, high_e_coefficient(k1S) * std::log(c.mc2 / e_avg), 1e-18);
  EXPECT_NEAR(shift, 3.39e-5, 0.02e-5);
  EXPECT_THROW(bethe_log_shift(k2P, e_avg), std::invalid_argument);
}

TEST(Estimates, RmsDisplacement) {
  const auto &c = codata2018();
  const double compton_fm = c.hbar_over_mc;
  const double x = rms_displacement(19.77 * c.ground_binding, c.mc2);
  EXPECT_NEAR(x, compton_fm * std::sqrt(2 * c.alpha / std::numbers::pi *
                                        std::log(c.mc2 / (19.77 * c.ground_binding))),
              1e-9);
  EXPECT_NEAR(x, 72.3, 0.5);
  EXPECT_EQ(rms_displacement(5.0, 5.0), 0.0);
  EXPECT_THROW(rms_displacement(0.0, 1.0), std::domain_error);
  EXPECT_THROW(rms_displacement(2.0, 1.0), std::invalid_argument);
  // Property: doubling the log range multiplies by sqrt 2.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double a = std::exp(u(rng)), k = u(rng);
    EXPECT_NEAR(rms_displacement(a, a * std::exp(2 * k)),
                std::sqrt(2.0) * rms_displacement(a, a * std::exp(k)), 1e-9);
  }
}

TEST(Estimates, DensityAtOrigin) {
  const double a0 = 0.529177210903;
  EXPECT_NEAR(density_at_origin(k1S), 1.0 / (std::numbers::pi * a0 * a0 * a0), 1e-6);
  EXPECT_NEAR(density_at_origin(k2S), density_at_origin(k1S) / 8, 1e-9);
  EXPECT_EQ(density_at_origin(k2P), 0.0);
}
