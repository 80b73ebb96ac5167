#include "lshift/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace lshift {

QuadratureRule parse_quadrature_rule(std::string_view name) {
  if (name == "gauss-kronrod" || name == "gk" || name == "gk21")
    return QuadratureRule::gauss_kronrod;
  if (name == "tanh-sinh" || name == "ts")
    return QuadratureRule::tanh_sinh;
  throw std::invalid_argument("unknown quadrature rule '" + std::string(name) + "'");
}

std::string_view to_string(QuadratureRule rule) {
  return rule == QuadratureRule::gauss_kronrod ? "gauss-kronrod" : "tanh-sinh";
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be positive");
  if (max_subdivisions < 8)
    throw std::invalid_argument("max_subdivisions must be >= 8");
  if (!(s_truncation_epsilon > 0.0) || s_truncation_epsilon >= 1.0)
    throw std::invalid_argument("s_truncation_epsilon must lie in (0, 1)");
  if (!(tail_split >= 1.0) || tail_split > 40.0)
    throw std::invalid_argument("tail_split must lie in [1, 40]");
}

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980946140, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

} // namespace

QuadratureResult gk21_panel(const Integrand &f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  double fv1[10];
  double fv2[10];
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double scale = std::abs(half);
  const double result = resk * half;
  resabs *= scale;
  resasc *= scale;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);

  QuadratureResult out;
  out.value = result;
  out.error = err;
  out.evaluations = 21;
  out.subdivisions = 1;
  out.converged = std::isfinite(result);
  return out;
}

QuadratureResult integrate_gk21(const Integrand &f, std::span<const double> breakpoints,
                                const AdaptiveOptions &options) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("adaptive quadrature needs at least two breakpoints");
  std::priority_queue<Panel> heap;
  QuadratureResult total;
  total.evaluations = 0;
  total.subdivisions = 0;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a))
      throw std::invalid_argument("breakpoints must be strictly increasing");
    const auto r = gk21_panel(f, a, b);
    total.evaluations += r.evaluations;
    ++total.subdivisions;
    value += r.value;
    error += r.error;
    heap.push(Panel{a, b, r.value, r.error});
  }

  auto tolerance = [&] {
    return std::max(options.abs_tol,
                    options.rel_tol * std::max(std::abs(value), options.reference));
  };

  while (error > tolerance() && !heap.empty()) {
    if (total.subdivisions >= options.max_subdivisions) {
      total.converged = false;
      break;
    }
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel at machine resolution; nothing left to refine.
      total.converged = false;
      break;
    }
    heap.pop();
    const auto left = gk21_panel(f, worst.a, mid);
    const auto right = gk21_panel(f, mid, worst.b);
    total.evaluations += left.evaluations + right.evaluations;
    ++total.subdivisions;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(Panel{worst.a, mid, left.value, left.error});
    heap.push(Panel{mid, worst.b, right.value, right.error});
  }

  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  total.value = value;
  total.error = error;
  if (!std::isfinite(value))
    total.converged = false;
  return total;
}

QuadratureResult integrate_tanh_sinh(const Integrand &f, double a, double b,
                                     const AdaptiveOptions &options) {
  long evaluations = 0;
  auto counted = [&](double x) {
    ++evaluations;
    return f(x);
  };
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  QuadratureResult out;
  const double tol = std::max(options.rel_tol, std::numeric_limits<double>::epsilon());
  try {
    out.value = integrator.integrate(counted, a, b, tol, &error, &l1, &levels);
  } catch (const std::exception &) {
    out.value = std::numeric_limits<double>::quiet_NaN();
    error = std::numeric_limits<double>::infinity();
  }
  // Boost reports a relative error estimate.
  out.error = error * std::max(std::abs(out.value), l1);
  out.evaluations = evaluations;
  out.subdivisions = static_cast<int>(levels);
  const double target =
      std::max(options.abs_tol,
               options.rel_tol * std::max(std::abs(out.value), options.reference));
  out.converged = std::isfinite(out.value) && out.error <= target;
  return out;
}

QuadratureResult integrate(const Integrand &f, std::span<const double> breakpoints,
                           const AdaptiveOptions &options) {
  if (options.rule == QuadratureRule::gauss_kronrod)
    return integrate_gk21(f, breakpoints, options);
  if (breakpoints.size() < 2)
    throw std::invalid_argument("quadrature needs at least two breakpoints");
  QuadratureResult total;
  total.evaluations = 0;
  total.subdivisions = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto r = integrate_tanh_sinh(f, breakpoints[i], breakpoints[i + 1], options);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.subdivisions += r.subdivisions;
    total.converged = total.converged && r.converged;
  }
  return total;
}

} // namespace lshift
