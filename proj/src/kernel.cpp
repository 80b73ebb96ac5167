#include "lshift/kernel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace lshift {

namespace {

constexpr double kMaxExponent = 709.0;
// Above this value of s e^{-phi} the closed forms are evaluated in log space.
constexpr double kLogSpaceThreshold = 500.0;

void check_domain(double s, double phi) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw std::domain_error("integration variable s must be finite and >= 0");
  if (!(phi > 0.0) || !std::isfinite(phi))
    throw std::domain_error("normalized frequency phi must be finite and > 0");
}

// log(sinh(x)) for x > 0 without overflow.
double log_sinh(double x) {
  return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

double coth(double x) { return 1.0 / std::tanh(x); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
}

} // namespace

//==============================================================================
KernelPoint kernel_point(double s, double phi, const HydrogenState &state) {
  check_domain(s, phi);
  const double ch = std::cosh(0.5 * s);
  const double sh = std::sinh(0.5 * s);
  const double c = std::cosh(phi);
  return KernelPoint{s, phi, ch - sh * c, ch + sh * c, state.n() * std::exp(-phi)};
}

CoefficientSeries series_coefficients(const KernelPoint &point, int k_max) {
  if (k_max < 1 || k_max >= kMaxCoefficients)
    throw std::invalid_argument("k_max must lie in [1, " +
                                std::to_string(kMaxCoefficients - 1) + "]");
  const auto a = detail::inversion_coefficients(point.d, point.b, 1.0, k_max);
  return CoefficientSeries{std::vector<double>(a.begin(), a.begin() + k_max + 1)};
}

std::vector<Partition> partitions(int n, int l) {
  if (n < 1 || n > kMaxPrincipal)
    throw std::invalid_argument("principal quantum number outside partition cap [1, " +
                                std::to_string(kMaxPrincipal) + "]");
  if (l < 0 || l >= n)
    throw std::invalid_argument("require 0 <= L < N for M_NL");

  std::vector<Partition> out;
  Partition current;
  // Parts are generated in non-increasing order to visit each partition once.
  std::function<void(int, int)> recurse = [&](int remaining, int largest) {
    if (remaining == 0) {
      if (current.parts > l) {
        double denom = 1.0;
        for (int p = 1; p <= n; ++p)
          denom *= factorial(current.multiplicity[p]);
        Partition p = current;
        p.multinomial = factorial(current.parts) / denom;
        out.push_back(p);
      }
      return;
    }
    for (int part = std::min(remaining, largest); part >= 1; --part) {
      ++current.multiplicity[part];
      ++current.parts;
      recurse(remaining - part, part);
      --current.multiplicity[part];
      --current.parts;
    }
  };
  recurse(n, n);
  return out;
}

double m_nl(const CoefficientSeries &series, int n, int l) {
  const auto terms = partitions(n, l);
  if (series.k_max() < n - 1)
    throw std::invalid_argument("coefficient series too short for requested N");
  const auto &a = series.coefficients;
  double sum = 0.0;
  for (const auto &term : terms) {
    double t = term.multinomial * integer_power(a[0], term.parts);
    for (int p = 2; p <= n; ++p)
      if (term.multiplicity[p] > 0)
        t *= integer_power(a[p - 1], term.multiplicity[p]);
    sum += t;
  }
  return sum;
}

double m_nl(const KernelPoint &point, int n, int l) {
  if (l < 0 || l >= n)
    throw std::invalid_argument("require 0 <= L < N for M_NL");
  return m_nl(series_coefficients(point, std::max(n - 1, 1)), n, l);
}

//==============================================================================
LevelKernel::LevelKernel(const HydrogenState &state)
    : state_(state), terms_(partitions(state.n(), state.l())) {}

LevelKernel::Slice::Slice(const LevelKernel &kernel, double phi)
    : kernel_(&kernel), phi_(phi) {
  if (!(phi > 0.0) || !std::isfinite(phi))
    throw std::domain_error("normalized frequency phi must be finite and > 0");
  const double sh = std::sinh(0.5 * phi);
  const double ch = std::cosh(0.5 * phi);
  one_plus_c_ = 2.0 * ch * ch;
  one_minus_c_ = -2.0 * sh * sh;
  const int n = kernel.state_.n();
  nu_ = n * std::exp(-phi);
  nu_minus_one_ = (n - 1) + n * std::expm1(-phi);
}

double LevelKernel::Slice::integrand(double s) const {
  if (!(s >= 0.0))
    throw std::domain_error("integration variable s must be >= 0");
  const double exponent = nu_minus_one_ * s;
  if (exponent > kMaxExponent)
    throw std::range_error("integrand overflows at s = " + std::to_string(s));
  const auto f = profile(std::exp(-s));
  return -std::exp(exponent) * f.derivative();
}

TailExpansion LevelKernel::Slice::tail() const {
  const auto f = reduced_profile(Jet<kTailOrder>::variable(0.0));
  TailExpansion out;
  // F(u) = sum f_k u^k  =>  -F'(u) = -sum (k+1) f_{k+1} u^k
  for (int k = 0; k + 1 <= kTailOrder; ++k)
    out.coefficients[k] = -(k + 1) * f[k + 1];
  return out;
}

double integrand_general(double s, double phi, const HydrogenState &state) {
  check_domain(s, phi);
  const LevelKernel kernel(state);
  return kernel.at(phi).integrand(s);
}

//==============================================================================
double integrand_1s(double s, double phi) {
  check_domain(s, phi);
  if (s == 0.0)
    return 0.0;
  const double c = std::cosh(phi);
  const double growth = s * std::exp(-phi);
  if (growth <= kLogSpaceThreshold) {
    const double sh = std::sinh(0.5 * s);
    const double bracket = coth(0.5 * s) + c;
    return std::exp(growth) / (sh * sh * bracket * bracket * bracket);
  }
  const double log_w = growth - 2.0 * log_sinh(0.5 * s) - 3.0 * std::log(coth(0.5 * s) + c);
  if (log_w > kMaxExponent)
    throw std::range_error("1S integrand overflows at s = " + std::to_string(s));
  return std::exp(log_w);
}

double integrand_2s2p(double s, double phi) {
  check_domain(s, phi);
  if (s == 0.0)
    return 0.0;
  const double c = std::cosh(phi);
  const double growth = 2.0 * s * std::exp(-phi);
  const double bracket = c + coth(0.5 * s);
  if (growth <= kLogSpaceThreshold) {
    const double sh = std::sinh(0.5 * s);
    const double sp = std::sinh(phi);
    return 4.0 * std::exp(growth + phi) * sp * sp * sp /
           (sh * sh * std::pow(bracket, 5));
  }
  const double log_w = std::log(4.0) + growth + phi + 3.0 * std::log(std::sinh(phi)) -
                       2.0 * log_sinh(0.5 * s) - 5.0 * std::log(bracket);
  if (log_w > kMaxExponent)
    throw std::range_error("2S-2P integrand overflows at s = " + std::to_string(s));
  return std::exp(log_w);
}

double integrand_2p(double s, double phi) {
  check_domain(s, phi);
  if (s == 0.0)
    return 0.0;
  const double c = std::cosh(phi);
  const double growth = 2.0 * s * std::exp(-phi);
  const double bracket = c + coth(0.5 * s);
  if (growth <= kLogSpaceThreshold) {
    const double sh = std::sinh(0.5 * s);
    const double sh2 = sh * sh;
    const double poly = c * std::sinh(s) + std::cosh(s) - 3.0;
    return -std::exp(growth + phi) * std::sinh(phi) * poly /
           (2.0 * sh2 * sh2 * std::pow(bracket, 5));
  }
  // s > 500 here, so the polynomial factor is positive.
  const double em = std::exp(-s);
  const double log_poly =
      s + std::log(0.5 * (c * (1.0 - em * em) + (1.0 + em * em)) - 3.0 * em);
  const double log_w = growth + phi + std::log(std::sinh(phi)) + log_poly -
                       4.0 * log_sinh(0.5 * s) - std::log(2.0) - 5.0 * std::log(bracket);
  if (log_w > kMaxExponent)
    throw std::range_error("2P integrand overflows at s = " + std::to_string(s));
  return -std::exp(log_w);
}

} // namespace lshift
