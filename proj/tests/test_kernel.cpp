#include "lshift/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace lshift;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// sinh^2(s/2) M_NL evaluated through the raw series, for finite differences.
double bracket(double s, double phi, const HydrogenState &st) {
  const auto p = kernel_point(s, phi, st);
  const double sh = std::sinh(0.5 * s);
  return sh * sh * m_nl(p, st.n(), st.l());
}

double fd_derivative(const std::function<double(double)> &f, double x, double h) {
  // 8th-order central difference.
  constexpr double c[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  double d = 0.0;
  for (int k = 1; k <= 4; ++k)
    d += c[k - 1] * (f(x + k * h) - f(x - k * h));
  return d / h;
}

long double fd_derivative_ld(const std::function<long double(long double)> &f, long double x,
                             long double h) {
  constexpr long double c[4] = {4.0L / 5, -1.0L / 5, 4.0L / 105, -1.0L / 280};
  long double d = 0.0L;
  for (int k = 1; k <= 4; ++k)
    d += c[k - 1] * (f(x + k * h) - f(x - k * h));
  return d / h;
}

// Taylor coefficients of h(x)^2 where h = 1/(d + x(b - h)), by a discrete
// Cauchy integral of the quadratic-formula root on a small circle.
std::vector<double> cauchy_coefficients(double d, double b, int k_max, double &radius) {
  // Branch points solve b^2 x^2 + (2 d b - 4) x + d^2 = 0.
  const std::complex<double> qa(b * b), qb(2 * d * b - 4), qc(d * d);
  double nearest = 1e300;
  if (b != 0.0) {
    const auto disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    nearest = std::min(std::abs((-qb + disc) / (2.0 * qa)), std::abs((-qb - disc) / (2.0 * qa)));
  } else {
    nearest = d * d / 4;
  }
  radius = 0.25 * std::min(nearest, 1.0);
  constexpr int m = 128;
  std::vector<double> out(k_max + 1, 0.0);
  for (int j = 0; j < m; ++j) {
    const auto w = std::polar(1.0, 2 * std::numbers::pi * j / m);
    const auto x = radius * w;
    const auto p = d + x * b;
    const auto h = 2.0 / (p + std::sqrt(p * p - 4.0 * x));
    const auto h2 = h * h;
    for (int k = 0; k <= k_max; ++k)
      out[k] += (h2 * std::pow(w, -k)).real() / (m * std::pow(radius, k));
  }
  return out;
}

} // namespace

TEST(Jet, QuotientMatchesGeometricSeries) {
  const auto t = Jet<6>::variable(0.0);
  const auto q = Jet<6>(1.0) / (Jet<6>(1.0) - t);
  for (int k = 0; k <= 6; ++k)
    EXPECT_DOUBLE_EQ(q[k], 1.0);
  const auto sq = (Jet<6>(1.0) + t) * (Jet<6>(1.0) + t);
  EXPECT_DOUBLE_EQ(sq[1], 2.0);
  EXPECT_DOUBLE_EQ(sq[2], 1.0);
  EXPECT_DOUBLE_EQ(sq[3], 0.0);
}

TEST(Jet, DualNumberDerivative) {
  const auto x = Jet<1>::variable(0.7);
  const auto f = integer_power(x, 5) / (Jet<1>(1.0) + x);
  const double expected = (5 * std::pow(0.7, 4) * 1.7 - std::pow(0.7, 5)) / (1.7 * 1.7);
  EXPECT_NEAR(f.derivative(), expected, 1e-14);
}

TEST(KernelPoint, BoundaryAtZero) {
  const auto p = kernel_point(0.0, 0.8, HydrogenState(2, 0));
  EXPECT_EQ(p.b, 1.0);
  EXPECT_EQ(p.d, 1.0);
  const auto a = series_coefficients(p, 6);
  EXPECT_EQ(a.leading(), 1.0);
  for (int k = 1; k <= 6; ++k)
    EXPECT_EQ(a.coefficients[k], 0.0);
}

TEST(KernelPoint, DomainErrors) {
  EXPECT_THROW(kernel_point(-1.0, 1.0, HydrogenState(1, 0)), std::domain_error);
  EXPECT_THROW(kernel_point(1.0, 0.0, HydrogenState(1, 0)), std::domain_error);
  EXPECT_THROW(kernel_point(1.0, -1.0, HydrogenState(1, 0)), std::domain_error);
  const auto p = kernel_point(1.0, 1.0, HydrogenState(1, 0));
  EXPECT_THROW(series_coefficients(p, 0), std::invalid_argument);
  EXPECT_THROW(series_coefficients(p, kMaxCoefficients), std::invalid_argument);
  EXPECT_THROW(m_nl(p, 2, 2), std::invalid_argument);
  EXPECT_THROW(m_nl(p, kMaxPrincipal + 1, 0), std::invalid_argument);
}

TEST(SeriesInversion, FirstCoefficientsClosedForm) {
  const auto p = kernel_point(1.3, 0.9, HydrogenState(1, 0));
  const auto a = series_coefficients(p, 3);
  EXPECT_NEAR(a.leading(), 1.0 / (p.d * p.d), 1e-15);
  EXPECT_NEAR(a.coefficients[1], -(2.0 / p.d) * (p.b - 1.0 / p.d), 1e-14);
}

TEST(SeriesInversion, MatchesCauchyIntegralOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s_dist(0.05, 6.0), phi_dist(0.05, 4.0);
  for (int i = 0; i < 40; ++i) {
    const double s = s_dist(rng), phi = phi_dist(rng);
    const auto p = kernel_point(s, phi, HydrogenState(1, 0));
    const int k_max = 6;
    const auto a = series_coefficients(p, k_max);
    double radius = 0.0;
    const auto oracle = cauchy_coefficients(p.d, p.b, k_max, radius);
    EXPECT_NEAR(a.leading(), oracle[0], 1e-12 * oracle[0]);
    for (int k = 1; k <= k_max; ++k) {
      const double tol = 1e-9 * oracle[0] / std::pow(radius, k);
      EXPECT_NEAR(a.coefficients[k] * a.leading(), oracle[k], tol) << "s=" << s << " k=" << k;
    }
  }
}

TEST(Partitions, CountsAndMultinomials) {
  EXPECT_EQ(partitions(4, 0).size(), 5u);
  EXPECT_EQ(partitions(4, 3).size(), 1u);
  EXPECT_EQ(partitions(5, 0).size(), 7u);
  EXPECT_EQ(partitions(10, 0).size(), 42u);
  // 1+1+2 of 4: 3!/(2! 1!) = 3
  bool found = false;
  for (const auto &p : partitions(4, 0))
    if (p.parts == 3 && p.multiplicity[1] == 2 && p.multiplicity[2] == 1) {
      EXPECT_DOUBLE_EQ(p.multinomial, 3.0);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(MNL, LowOrderClosedForms) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s_dist(0.01, 10.0), phi_dist(0.01, 5.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = kernel_point(s_dist(rng), phi_dist(rng), HydrogenState(2, 0));
    const auto a = series_coefficients(p, 4);
    const double A = a.leading(), A1 = a.coefficients[1];
    EXPECT_EQ(m_nl(a, 1, 0), A);
    EXPECT_EQ(m_nl(a, 2, 1), A * A);
    EXPECT_NEAR(m_nl(a, 2, 0), A * A + A * A1, 1e-15 * std::abs(A * A + A * A1));
  }
}

TEST(MNL, HigherCoefficientsDoNotChangeResult) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s_dist(0.01, 10.0), phi_dist(0.01, 5.0);
  for (int n = 1; n <= 4; ++n)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < 10; ++i) {
        const auto p = kernel_point(s_dist(rng), phi_dist(rng), HydrogenState(n, l));
        const int k = std::max(n - 1, 1);
        const double lo = m_nl(series_coefficients(p, k), n, l);
        const double hi = m_nl(series_coefficients(p, k + 2), n, l);
        EXPECT_LE(rel(hi, lo), 1e-12);
      }
}

TEST(Integrand, OneSClosedFormDirectArithmetic) {
  const double s = 1.0, phi = 1.0;
  const double coth = std::cosh(0.5) / std::sinh(0.5);
  const double expected = std::exp(std::exp(-1.0)) / std::pow(std::sinh(0.5), 2) /
                          std::pow(coth + std::cosh(1.0), 3);
  EXPECT_NEAR(integrand_1s(s, phi), expected, 1e-15 * expected);
}

TEST(Integrand, OneSDerivativeIdentity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> log_s(std::log(0.01), std::log(20.0));
  std::uniform_real_distribution<double> phi_dist(0.05, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double s = std::exp(log_s(rng)), phi = phi_dist(rng);
    // Differentiate g - g(inf) = -q (2(1+c) + q) / (t^2 (1+c)^2) with
    // q = coth(s/2) - 1, so the quotient keeps its digits at large s.
    const long double c1 = 1.0L + std::cosh(static_cast<long double>(phi));
    auto g = [c1](long double x) {
      const long double q = 2.0L / std::expm1(x);
      const long double t = c1 + q;
      return -q * (2.0L * c1 + q) / (t * t * c1 * c1);
    };
    const double fd = static_cast<double>(fd_derivative_ld(g, s, std::min(0.02 * s, 0.02)));
    const double analytic = integrand_1s(s, phi) * std::exp(-s * std::exp(-phi));
    EXPECT_LE(rel(analytic, fd), 1e-8) << "s=" << s << " phi=" << phi;
  }
}

TEST(Integrand, GenericEqualsOneSClosedForm) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> s_dist(1e-3, 40.0), phi_dist(0.02, 5.2);
  const HydrogenState st(1, 0);
  for (int i = 0; i < 100; ++i) {
    const double s = s_dist(rng), phi = phi_dist(rng);
    EXPECT_LE(rel(integrand_general(s, phi, st), integrand_1s(s, phi)), 1e-12);
  }
}

TEST(Integrand, TwoLevelClosedFormsMatchGeneric) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> s_dist(1e-2, 30.0), phi_dist(0.75, 5.2);
  const HydrogenState s2(2, 0), p2(2, 1);
  for (int i = 0; i < 100; ++i) {
    const double s = s_dist(rng), phi = phi_dist(rng);
    const double measure = std::exp(phi) * std::sinh(phi);
    const double w2s = integrand_general(s, phi, s2);
    const double w2p = integrand_general(s, phi, p2);
    EXPECT_LE(rel(w2s - w2p, integrand_2s2p(s, phi) / measure), 1e-10) << s << " " << phi;
    EXPECT_LE(rel(w2p, integrand_2p(s, phi) / measure), 1e-10) << s << " " << phi;
  }
}

TEST(Integrand, GenericMatchesFiniteDifferenceOfRawSeries) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> s_dist(0.2, 6.0), phi_dist(0.3, 4.0);
  for (int n = 1; n <= 4; ++n)
    for (int l = 0; l < n; ++l) {
      const HydrogenState st(n, l);
      for (int i = 0; i < 8; ++i) {
        const double s = s_dist(rng), phi = phi_dist(rng);
        auto g = [&](double x) { return bracket(x, phi, st); };
        const double nu = n * std::exp(-phi);
        const double fd = std::exp(nu * s) * fd_derivative(g, s, 1e-2);
        EXPECT_LE(rel(integrand_general(s, phi, st), fd), 1e-7)
            << st.label() << " s=" << s << " phi=" << phi;
      }
    }
}

TEST(Integrand, VanishesAtOriginAndDecays) {
  for (double phi : {0.1, 1.0, 4.0}) {
    const double a = integrand_general(1e-6, phi, HydrogenState(1, 0));
    const double b = integrand_general(2e-6, phi, HydrogenState(1, 0));
    EXPECT_NEAR(b / a, 2.0, 1e-4);
    EXPECT_EQ(integrand_1s(0.0, phi), 0.0);
    EXPECT_LT(std::abs(integrand_1s(200.0, phi)), 1e-6 * integrand_1s(1.0, phi) + 1e-300);
  }
  EXPECT_NEAR(integrand_general(1e-7, 1.0, HydrogenState(2, 1)), 0.0, 1e-5);
}

TEST(Integrand, TwoSMinusTwoPPositiveOnGrid) {
  for (double s = 0.01; s < 60; s *= 1.3)
    for (double phi = 0.05; phi < 5.3; phi += 0.25)
      EXPECT_GT(integrand_2s2p(s, phi), 0.0) << s << " " << phi;
}

TEST(Integrand, LogSpaceBranchIsContinuous) {
  // s e^{-phi} crosses the switch-over at 500.
  const double phi = 0.01;
  const double s_switch = 500.0 * std::exp(phi);
  const double below = integrand_1s(s_switch * (1 - 1e-9), phi);
  const double above = integrand_1s(s_switch * (1 + 1e-9), phi);
  EXPECT_LE(rel(below, above), 1e-6);
}

TEST(LevelKernel, TailSeriesReproducesIntegrand) {
  for (auto st : {HydrogenState(1, 0), HydrogenState(2, 0), HydrogenState(2, 1),
                  HydrogenState(3, 1)}) {
    const LevelKernel kernel(st);
    for (double phi : {0.2, 1.0, 3.0, 5.0}) {
      const auto slice = kernel.at(phi);
      const auto t = slice.tail();
      const double s = 5.0;
      const double u = std::exp(-s);
      double sum = 0.0;
      for (int k = kTailOrder - 1; k >= 0; --k)
        sum = sum * u + t.coefficients[k];
      const double expected = slice.integrand(s) * std::exp(-slice.nu_minus_one() * s);
      EXPECT_LE(rel(sum, expected), 1e-12) << st.label() << " phi=" << phi;
    }
  }
}

TEST(LevelKernel, NuMinusOneAccurate) {
  const LevelKernel kernel(HydrogenState(1, 0));
  const auto slice = kernel.at(1e-12);
  EXPECT_NEAR(slice.nu_minus_one(), -1e-12, 1e-24);
}

TEST(LevelKernel, OverflowReported) {
  const LevelKernel kernel(HydrogenState(3, 0));
  EXPECT_THROW(kernel.at(0.01).integrand(1000.0), std::range_error);
}
