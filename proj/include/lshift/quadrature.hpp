#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string_view>

namespace lshift {

enum class QuadratureRule { gauss_kronrod, tanh_sinh };

QuadratureRule parse_quadrature_rule(std::string_view name);
std::string_view to_string(QuadratureRule rule);

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  //! Panel budget for one adaptive integral.
  int max_subdivisions = 400;
  //! Target size of the first neglected term of the large-s tail series.
  double s_truncation_epsilon = 1e-16;
  //! s beyond which the integrand is replaced by its e^{-s} power series.
  double tail_split = 4.0;
  QuadratureRule rule = QuadratureRule::gauss_kronrod;

  //! Throws std::invalid_argument.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  int subdivisions = 0;
  bool converged = true;
};

//! Tolerance and budget for one call of the adaptive integrator.
struct AdaptiveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_subdivisions = 400;
  //! Magnitude that the relative tolerance also applies to, for integrals
  //! that are one part of a larger sum.
  double reference = 0.0;
  QuadratureRule rule = QuadratureRule::gauss_kronrod;
};

using Integrand = std::function<double(double)>;

//! Globally adaptive 21-point Gauss-Kronrod quadrature over the panels
//! defined by `breakpoints` (at least two, increasing). Bisects the panel
//! with the largest error until the summed error meets the tolerance or the
//! panel budget is exhausted (converged = false).
QuadratureResult integrate_gk21(const Integrand &f, std::span<const double> breakpoints,
                                const AdaptiveOptions &options);

//! Double-exponential rule on [a, b] (Boost.Math tanh_sinh).
QuadratureResult integrate_tanh_sinh(const Integrand &f, double a, double b,
                                     const AdaptiveOptions &options);

//! Dispatch on options.rule; tanh-sinh is applied panel by panel.
QuadratureResult integrate(const Integrand &f, std::span<const double> breakpoints,
                           const AdaptiveOptions &options);

//! Single GK21 panel, exposed for tests. Returns the Kronrod value and the
//! QUADPACK-style error estimate.
QuadratureResult gk21_panel(const Integrand &f, double a, double b);

} // namespace lshift
