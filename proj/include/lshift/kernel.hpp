#pragma once

#include "lshift/hydrogen.hpp"
#include "lshift/jet.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace lshift {

//! Largest principal quantum number the partition enumeration accepts.
inline constexpr int kMaxPrincipal = 10;
//! Capacity of the x-series used by the coefficient inversion.
inline constexpr int kMaxCoefficients = 16;

//==============================================================================
//! Hyperbolic quantities shared by every integrand at one (s, phi).
struct KernelPoint {
  double s;
  double phi;
  double b;  // cosh(s/2) - sinh(s/2) cosh(phi)
  double d;  // cosh(s/2) + sinh(s/2) cosh(phi)
  double nu; // N e^{-phi}
};

//! Throws std::domain_error for s < 0 or phi <= 0.
KernelPoint kernel_point(double s, double phi, const HydrogenState &state);

//! A, A_1, ..., A_kmax of e^{-psi} = A e^{-beta}[1 + A_1 e^{-beta} + ...].
struct CoefficientSeries {
  std::vector<double> coefficients;

  double leading() const { return coefficients.front(); }
  int k_max() const { return static_cast<int>(coefficients.size()) - 1; }
};

//! Throws std::invalid_argument unless 1 <= k_max < kMaxCoefficients.
CoefficientSeries series_coefficients(const KernelPoint &point, int k_max);

//! Multinomial partition sum M_NL. Throws std::invalid_argument for L >= N
//! or N above kMaxPrincipal.
double m_nl(const KernelPoint &point, int n, int l);
double m_nl(const CoefficientSeries &series, int n, int l);

//==============================================================================
//! Canonical s-integrand e^{nu s} d/ds[sinh^2(s/2) M_NL(s)].
//! Throws std::range_error when e^{(nu-1)s} would overflow.
double integrand_general(double s, double phi, const HydrogenState &state);

//! e^{s e^{-phi}} csch^2(s/2) (coth(s/2) + cosh phi)^{-3}.
double integrand_1s(double s, double phi);

//! Closed 2S-2P form, 4 e^{2s e^{-phi} + phi} sinh^3(phi) csch^2(s/2) / (cosh phi + coth(s/2))^5.
//! Carries the extra phi-measure factor e^{phi} sinh(phi) relative to
//! integrand_general.
double integrand_2s2p(double s, double phi);

//! Closed 2P form, same normalisation as integrand_2s2p.
double integrand_2p(double s, double phi);

//==============================================================================
namespace detail {

//! Fixed-point inversion of h = 1/(d + x(b - w h)) on truncated power series
//! in x; returns A = [h^2]_0 and A_k = [h^2]_k / [h^2]_0 for k = 1..k_max.
//! w = 1 gives the raw coefficients, w = e^{-s} with (d, b) rescaled by
//! e^{-s/2} gives the same A_k with A scaled by e^{s}.
template <class T>
std::array<T, kMaxCoefficients> inversion_coefficients(const T &d, const T &b,
                                                       const T &w, int k_max) {
  using Series = std::array<T, kMaxCoefficients>;
  Series h{};
  for (int iter = 0; iter <= k_max; ++iter) {
    Series q{};
    q[0] = d;
    if (k_max >= 1)
      q[1] = b;
    for (int i = 0; i < k_max; ++i)
      q[i + 1] = q[i + 1] - w * h[i];
    Series inv{};
    inv[0] = T(1.0) / q[0];
    for (int n = 1; n <= k_max; ++n) {
      T acc(0.0);
      for (int i = 1; i <= n; ++i)
        acc = acc + q[i] * inv[n - i];
      inv[n] = -(acc * inv[0]);
    }
    h = inv;
  }
  Series out{};
  T g0 = h[0] * h[0];
  out[0] = g0;
  for (int n = 1; n <= k_max; ++n) {
    T g(0.0);
    for (int i = 0; i <= n; ++i)
      g = g + h[i] * h[n - i];
    out[n] = g / g0;
  }
  return out;
}

} // namespace detail

//! One term of the M_NL multinomial sum: a partition of N with `parts`
//! parts (> L), multiplicity[p] parts of size p.
struct Partition {
  int parts = 0;
  double multinomial = 0.0;
  std::array<int, kMaxPrincipal + 1> multiplicity{};
};

//! All partitions of n with more than l parts.
std::vector<Partition> partitions(int n, int l);

//! Taylor expansion of the reduced profile derivative around u = e^{-s} = 0.
inline constexpr int kTailOrder = 24;
struct TailExpansion {
  //! t_k such that -dF/du(u) = sum_k t_k u^k with F the reduced profile.
  std::array<double, kTailOrder> coefficients{};
};

//! State-specific integrand evaluator. Precomputes the partition table; the
//! per-phi quantities live in Slice.
//!
//! With u = e^{-s} and D, B the e^{-s/2}-rescaled d, b, the bracket
//! sinh^2(s/2) M_NL(s) is a rational function F(u) that stays finite as
//! s -> infinity. The s-integrand is then -e^{(nu-1)s} F'(u), which never
//! overflows for nu < 1 and whose large-s behaviour is a power series in u.
class LevelKernel {
public:
  explicit LevelKernel(const HydrogenState &state);

  const HydrogenState &state() const { return state_; }
  const std::vector<Partition> &terms() const { return terms_; }

  class Slice {
  public:
    Slice(const LevelKernel &kernel, double phi);

    const LevelKernel &kernel() const { return *kernel_; }
    double phi() const { return phi_; }
    double nu() const { return nu_; }
    //! nu - 1, computed without cancellation.
    double nu_minus_one() const { return nu_minus_one_; }

    //! -e^{(nu-1)s} F'(e^{-s}); throws std::range_error on overflow.
    double integrand(double s) const;

    //! F(u) and F'(u) for one u in [0, 1].
    Jet<1> profile(double u) const { return reduced_profile(Jet<1>::variable(u)); }

    //! Taylor coefficients of -F'(u) at u = 0.
    TailExpansion tail() const;

    template <class T> T reduced_profile(const T &u) const;

  private:
    const LevelKernel *kernel_;
    double phi_;
    double one_plus_c_;
    double one_minus_c_;
    double nu_;
    double nu_minus_one_;
  };

  Slice at(double phi) const { return Slice(*this, phi); }

private:
  HydrogenState state_;
  std::vector<Partition> terms_;
};

template <class T>
T LevelKernel::Slice::reduced_profile(const T &u) const {
  const int n = kernel_->state_.n();
  const T d = 0.5 * (T(one_plus_c_) + one_minus_c_ * u);
  const T b = 0.5 * (T(one_minus_c_) + one_plus_c_ * u);
  const auto a = detail::inversion_coefficients(d, b, u, std::max(n - 1, 1));

  // sum over partitions of A~^j u^{j-1} j!/(prod m_p!) prod A_{p-1}^{m_p}
  T sum(0.0);
  for (const auto &term : kernel_->terms_) {
    T t = term.multinomial * integer_power(a[0], term.parts) *
          integer_power(u, term.parts - 1);
    for (int p = 2; p <= n; ++p)
      if (term.multiplicity[p] > 0)
        t = t * integer_power(a[p - 1], term.multiplicity[p]);
    sum = sum + t;
  }
  const T one_minus_u = T(1.0) - u;
  return 0.25 * (one_minus_u * one_minus_u) * sum;
}

} // namespace lshift
