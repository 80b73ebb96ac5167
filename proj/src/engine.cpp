#include "lshift/engine.hpp"

#include "lshift/models.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace lshift {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// |k+1-nu| below this (relative) counts as sitting on a tail pole.
constexpr double kPoleProximity = 1e-9;
// Offset used to bridge a removable pole by interpolation.
constexpr double kPoleBridge = 1e-5;
// Inner integrals are asked for this fraction of the outer tolerance.
constexpr double kInnerTolFactor = 0.1;
constexpr double kMaxTailSplit = 40.0;

void check_photon_energy(double energy, const PhysicalConstants &c) {
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw std::domain_error("photon energy must be finite and > 0");
  if (energy > energy_ceiling(c))
    throw std::domain_error("photon energy above mc^2 is outside the model");
}

void check_range(double e_min, double e_max, const PhysicalConstants &c) {
  if (!(e_min > 0.0))
    throw std::invalid_argument("lower energy bound must be > 0");
  if (!(e_max > e_min))
    throw std::invalid_argument("require e_min < e_max");
  if (e_max > energy_ceiling(c))
    throw std::invalid_argument("upper energy bound exceeds mc^2");
}

template <class Body> void parallel_for(std::size_t count, int threads, Body &&body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers)
          body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

// Sum of t_k e^{(nu-1-k) s0} / (k+1-nu); also returns the size of the last term.
struct TailSum {
  double value = 0.0;
  double last = 0.0;
  double magnitude = 0.0;
  int pole = -1;
};

// Poles sit at nu = k+1 < n; nu -> n is the phi -> 0 edge, not a pole.
TailSum tail_sum(const TailExpansion &tail, int n, double nu, double nu_minus_one, double s0) {
  TailSum out;
  for (int k = 0; k < kTailOrder; ++k) {
    const double gap = k == 0 ? -nu_minus_one : (k + 1) - nu;
    if (k + 1 < n && std::abs(gap) < kPoleProximity * (k + 1)) {
      out.pole = k;
      continue;
    }
    const double term = tail.coefficients[k] * std::exp((nu_minus_one - k) * s0) / gap;
    out.value += term;
    out.magnitude += std::abs(term);
    out.last = std::abs(term);
  }
  return out;
}

SIntegral s_integral_direct(const LevelKernel::Slice &slice, const EngineConfig &config) {
  const auto &q = config.quadrature;
  SIntegral out;
  const auto tail = slice.tail();

  double s0 = q.tail_split;
  TailSum ts = tail_sum(tail, slice.kernel().state().n(), slice.nu(), slice.nu_minus_one(), s0);
  while (ts.last > q.s_truncation_epsilon * std::max(std::abs(ts.value), 1e-300) &&
         s0 < kMaxTailSplit) {
    s0 = std::min(1.5 * s0, kMaxTailSplit);
    ts = tail_sum(tail, slice.kernel().state().n(), slice.nu(), slice.nu_minus_one(), s0);
  }

  std::vector<double> breaks{0.0};
  for (int p = 5; p >= 1; --p)
    breaks.push_back(s0 * std::pow(4.0, -p));
  breaks.push_back(s0);

  AdaptiveOptions opts;
  opts.rel_tol = q.rel_tol;
  opts.abs_tol = q.abs_tol;
  opts.max_subdivisions = q.max_subdivisions;
  opts.reference = std::abs(ts.value);
  opts.rule = q.rule;
  const auto head =
      integrate([&](double s) { return slice.integrand(s); }, breaks, opts);

  out.value = head.value + ts.value;
  out.error = head.error + ts.last;
  out.evaluations = head.evaluations;
  if (!head.converged)
    out.flags |= Flag::max_subdivisions;
  const double scale = std::max(std::abs(head.value), ts.magnitude);
  if (scale > 1e6 * std::abs(out.value)) {
    out.flags |= Flag::precision_loss;
    out.error += 1e-16 * scale;
  }
  if (!std::isfinite(out.value))
    out.flags |= Flag::non_finite;
  return out;
}

} // namespace

//==============================================================================
std::string FlagSet::to_string() const {
  if (bits_ == 0)
    return "ok";
  static constexpr std::pair<Flag, const char *> names[] = {
      {Flag::max_subdivisions, "max_subdivisions"},
      {Flag::divergent, "divergent"},
      {Flag::resonance, "resonance"},
      {Flag::low_energy_asymptote, "low_energy_asymptote"},
      {Flag::precision_loss, "precision_loss"},
      {Flag::non_finite, "non_finite"},
  };
  std::string out;
  for (const auto &[flag, name] : names) {
    if (!has(flag))
      continue;
    if (!out.empty())
      out += '|';
    out += name;
  }
  return out;
}

LowEnergyMode parse_low_energy_mode(std::string_view name) {
  if (name == "continuation")
    return LowEnergyMode::continuation;
  if (name == "asymptote")
    return LowEnergyMode::asymptote;
  throw std::invalid_argument("unknown low-energy mode '" + std::string(name) + "'");
}

std::string_view to_string(LowEnergyMode mode) {
  return mode == LowEnergyMode::continuation ? "continuation" : "asymptote";
}

Model parse_model(std::string_view name) {
  if (name == "gt")
    return Model::gt;
  if (name == "bethe")
    return Model::bethe;
  if (name == "welton")
    return Model::welton;
  if (name == "power")
    return Model::power;
  if (name == "fit")
    return Model::fit;
  if (name == "asymptote")
    return Model::asymptote;
  if (name == "low_asymptote")
    return Model::low_asymptote;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string_view to_string(Model model) {
  switch (model) {
  case Model::gt:
    return "gt";
  case Model::bethe:
    return "bethe";
  case Model::welton:
    return "welton";
  case Model::power:
    return "power";
  case Model::fit:
    return "fit";
  case Model::asymptote:
    return "asymptote";
  case Model::low_asymptote:
    return "low_asymptote";
  }
  return "?";
}

void EngineConfig::validate() const {
  constants.validate();
  quadrature.validate();
  if (n_max < 2)
    throw std::invalid_argument("n_max must be >= 2");
  if (!(resonance_width >= 0.0))
    throw std::invalid_argument("resonance width must be >= 0");
  if (threads < 0)
    throw std::invalid_argument("thread count must be >= 0");
  if (seam_threshold && !(*seam_threshold > 0.0))
    throw std::invalid_argument("seam threshold must be > 0");
}

double downward_threshold(const HydrogenState &state, const PhysicalConstants &c) {
  const double n = state.n();
  return (n * n - 1.0) * -binding_energy(state, c);
}

double seam_threshold(const HydrogenState &state, const EngineConfig &config) {
  return config.seam_threshold.value_or(downward_threshold(state, config.constants));
}

//==============================================================================
SIntegral s_integral(const LevelKernel::Slice &slice, const EngineConfig &config) {
  const auto probe = tail_sum(slice.tail(), slice.kernel().state().n(), slice.nu(), slice.nu_minus_one(),
                              config.quadrature.tail_split);
  if (probe.pole < 0)
    return s_integral_direct(slice, config);

  // On a tail pole: bridge it if the residue vanishes, otherwise report it.
  const int k = probe.pole;
  const auto &kernel = slice.kernel();
  const double n = kernel.state().n();
  const double phi_pole = std::log(n / (k + 1));
  const double residue = std::abs(kernel.at(phi_pole).tail().coefficients[k]);
  const double dphi = kPoleBridge;
  const auto below = s_integral_direct(kernel.at(phi_pole - dphi), config);
  const auto above = s_integral_direct(kernel.at(phi_pole + dphi), config);
  const double side = std::max(std::abs(kernel.at(phi_pole - dphi).tail().coefficients[k]),
                               std::abs(kernel.at(phi_pole + dphi).tail().coefficients[k]));
  SIntegral out;
  out.evaluations = below.evaluations + above.evaluations;
  out.flags = below.flags | above.flags;
  if (residue > 1e-3 * side) {
    out.value = kNaN;
    out.error = std::numeric_limits<double>::infinity();
    out.flags |= Flag::resonance;
    return out;
  }
  const double w = (slice.phi() - (phi_pole - dphi)) / (2.0 * dphi);
  out.value = (1.0 - w) * below.value + w * above.value;
  out.error = std::max(below.error, above.error) + std::abs(above.value - below.value) * 1e-5;
  return out;
}

SIntegral s_integral(double phi, const HydrogenState &state, const EngineConfig &config) {
  const LevelKernel kernel(state);
  return s_integral(kernel.at(phi), config);
}

double shift_prefactor(const HydrogenState &state, const PhysicalConstants &c) {
  const double za2 = 2.0 * c.ground_binding * state.z() * state.z() / c.mc2;
  const double n4 = std::pow(static_cast<double>(state.n()), 4);
  return 4.0 * c.mc2 * c.alpha * za2 * za2 / (3.0 * std::numbers::pi * n4);
}

namespace {

// Shift per unit phi, prefactor x sinh(phi) e^phi x inner integral.
struct PhiDensity {
  const LevelKernel &kernel;
  const EngineConfig &config;
  double prefactor;

  SIntegral operator()(double phi) const {
    auto r = s_integral(kernel.at(phi), config);
    const double jac = prefactor * std::sinh(phi) * std::exp(phi);
    r.value *= jac;
    r.error *= jac;
    return r;
  }
};

EngineConfig inner_config(const EngineConfig &config) {
  EngineConfig inner = config;
  inner.quadrature.rel_tol *= kInnerTolFactor;
  return inner;
}

} // namespace

DensityPoint spectral_density(double energy, const HydrogenState &state,
                              const EngineConfig &config) {
  const auto &c = config.constants;
  check_photon_energy(energy, c);
  DensityPoint out;
  out.energy = energy;
  if (config.low_energy_mode == LowEnergyMode::asymptote && state.n() > 1 &&
      energy < seam_threshold(state, config)) {
    out.value = low_e_asymptote(energy, state, c);
    out.flags = Flag::low_energy_asymptote;
    return out;
  }
  const LevelKernel kernel(state);
  const PhiDensity g{kernel, config, shift_prefactor(state, c)};
  const double phi = phi_of_energy(energy, state, c);
  const auto r = g(phi);
  const double jac = denergy_dphi(phi, state, c);
  out.value = r.value / jac;
  out.error = r.error / jac;
  out.evaluations = r.evaluations;
  out.flags = r.flags;
  return out;
}

SeamReport low_energy_seam(const HydrogenState &state, const EngineConfig &config) {
  if (state.n() < 2)
    throw std::invalid_argument("the ground state has no low-energy seam");
  SeamReport out;
  out.threshold = seam_threshold(state, config);
  EngineConfig continued = config;
  continued.low_energy_mode = LowEnergyMode::continuation;
  out.continued = spectral_density(out.threshold, state, continued).value;
  out.asymptote = low_e_asymptote(out.threshold, state, config.constants);
  out.relative_mismatch = (out.asymptote - out.continued) / std::abs(out.continued);
  return out;
}

//==============================================================================
namespace {

struct OuterStats {
  long evaluations = 0;
  FlagSet flags;
  double max_relative_inner = 0.0;

  void absorb(const SIntegral &r) {
    evaluations += r.evaluations;
    flags |= r.flags;
    if (r.value != 0.0 && std::isfinite(r.value))
      max_relative_inner = std::max(max_relative_inner, r.error / std::abs(r.value));
  }
};

using Sampler = std::function<SIntegral(double)>;

// Integral of f over [a, b] with principal values taken at `poles`, by
// folding a symmetric window around each pole onto itself.
ShiftResult integrate_with_poles(const Sampler &f, double a, double b,
                                 std::vector<double> poles, const EngineConfig &config) {
  ShiftResult out;
  OuterStats stats;
  const auto &q = config.quadrature;
  AdaptiveOptions opts;
  opts.rel_tol = q.rel_tol;
  opts.abs_tol = q.abs_tol;
  opts.max_subdivisions = q.max_subdivisions;
  opts.rule = q.rule;

  // A genuine pole on an endpoint has no principal value; removable ones
  // come back finite and unflagged.
  for (double p : poles) {
    if (std::min(std::abs(p - a), std::abs(b - p)) < 1e-12 * std::max(1.0, std::abs(p))) {
      const auto at = f(p);
      if (at.flags.has(Flag::resonance) || !std::isfinite(at.value)) {
        out.flags |= Flag::divergent;
        out.flags |= Flag::resonance;
      }
    }
  }
  std::erase_if(poles, [&](double p) { return p <= a || p >= b; });
  std::sort(poles.begin(), poles.end());

  const double span = b - a;

  auto plain = [&](double x) {
    const auto r = f(x);
    stats.absorb(r);
    return r.value;
  };

  // Windows [p - h, p + h] that fit inside (a, b) and do not overlap.
  struct Window {
    double center, half;
  };
  std::vector<Window> windows;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    double h = std::min(poles[i] - a, b - poles[i]);
    if (i > 0)
      h = std::min(h, 0.5 * (poles[i] - poles[i - 1]));
    if (i + 1 < poles.size())
      h = std::min(h, 0.5 * (poles[i + 1] - poles[i]));
    h = std::min(h, 0.25 * span);
    windows.push_back({poles[i], h});
  }

  double value = 0.0;
  double error = 0.0;
  auto add_plain = [&](double lo, double hi) {
    // Windows touching an endpoint leave slivers of a few ulps.
    if (!(hi - lo > 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})))
      return;
    std::vector<double> breaks;
    const int panels = 8;
    for (int i = 0; i <= panels; ++i)
      breaks.push_back(i == panels ? hi : lo + (hi - lo) * i / panels);
    const auto r = integrate(plain, breaks, opts);
    value += r.value;
    error += r.error;
    if (!r.converged)
      out.flags |= Flag::max_subdivisions;
  };

  double cursor = a;
  for (const auto &w : windows) {
    add_plain(cursor, w.center - w.half);
    auto folded = [&](double t) {
      const auto lo = f(w.center - t);
      const auto hi = f(w.center + t);
      stats.evaluations += lo.evaluations + hi.evaluations;
      stats.flags |= lo.flags;
      stats.flags |= hi.flags;
      const double sum = lo.value + hi.value;
      if (sum != 0.0 && std::isfinite(sum))
        stats.max_relative_inner =
            std::max(stats.max_relative_inner, (lo.error + hi.error) / std::abs(sum));
      return sum;
    };
    const double breaks[] = {0.0, 0.25 * w.half, w.half};
    const auto r = integrate(folded, breaks, opts);
    value += r.value;
    error += r.error;
    if (!r.converged)
      out.flags |= Flag::max_subdivisions;
    cursor = w.center + w.half;
  }
  add_plain(cursor, b);

  out.value = value;
  out.error_estimate = error + stats.max_relative_inner * std::abs(value);
  out.integrand_evaluations = stats.evaluations;
  out.flags |= stats.flags;
  if (!std::isfinite(out.value))
    out.flags |= Flag::non_finite;
  return out;
}

// Analytic integral of the low-energy closed form over [lo, hi].
double low_e_integral(const HydrogenState &state, double lo, double hi,
                      const PhysicalConstants &c) {
  return low_e_intercept(state, c) * (hi - lo) + 0.5 * low_e_slope(c) * (hi * hi - lo * lo);
}

enum class OuterVariable { phi, log_energy };

ShiftResult total_shift_impl(const HydrogenState &state, double e_min, double e_max,
                             const EngineConfig &config, OuterVariable variable) {
  config.validate();
  const auto &c = config.constants;
  check_range(e_min, e_max, c);

  ShiftResult low;
  double lo = e_min;
  if (config.low_energy_mode == LowEnergyMode::asymptote && state.n() > 1) {
    const double thr = seam_threshold(state, config);
    if (e_min < thr) {
      const double hi = std::min(e_max, thr);
      low.value = low_e_integral(state, e_min, hi, c);
      low.flags = Flag::low_energy_asymptote;
      lo = hi;
    }
  }
  if (!(e_max > lo))
    return low;

  const LevelKernel kernel(state);
  const EngineConfig inner = inner_config(config);
  const PhiDensity g{kernel, inner, shift_prefactor(state, c)};

  std::vector<double> pole_phis;
  for (int k = 1; k < state.n(); ++k)
    pole_phis.push_back(std::log(static_cast<double>(state.n()) / k));

  ShiftResult high;
  if (variable == OuterVariable::phi) {
    high = integrate_with_poles(g, phi_of_energy(lo, state, c), phi_of_energy(e_max, state, c),
                                pole_phis, config);
  } else {
    auto f = [&](double t) {
      const double energy = std::exp(t);
      const double phi = phi_of_energy(energy, state, c);
      auto r = g(phi);
      const double jac = energy / denergy_dphi(phi, state, c);
      r.value *= jac;
      r.error *= jac;
      return r;
    };
    std::vector<double> pole_ts;
    for (double p : pole_phis)
      pole_ts.push_back(std::log(energy_of_phi(p, state, c)));
    high = integrate_with_poles(f, std::log(lo), std::log(e_max), pole_ts, config);
  }
  high.value += low.value;
  high.flags |= low.flags;
  return high;
}

} // namespace

ShiftResult total_shift(const HydrogenState &state, double e_min, double e_max,
                        const EngineConfig &config) {
  return total_shift_impl(state, e_min, e_max, config, OuterVariable::phi);
}

ShiftResult total_shift_by_energy(const HydrogenState &state, double e_min, double e_max,
                                  const EngineConfig &config) {
  return total_shift_impl(state, e_min, e_max, config, OuterVariable::log_energy);
}

//==============================================================================
SpectralSample model_density(double energy, const HydrogenState &state, Model model,
                             const EngineConfig &config) {
  const auto &c = config.constants;
  SpectralSample out{energy, kNaN, {}};
  if (model == Model::fit && !(state == HydrogenState(1, 0, state.z()) && state.z() == 1))
    throw std::invalid_argument("the rational fit describes hydrogen 1S only");
  try {
    switch (model) {
    case Model::gt: {
      const auto r = spectral_density(energy, state, config);
      out.density = r.value;
      out.flags = r.flags;
      break;
    }
    case Model::bethe:
      out.density = bethe_density_discrete(energy, state, config.n_max, c);
      break;
    case Model::welton:
      out.density = welton_density(energy, state, c);
      break;
    case Model::power:
      out.density = power_density(energy, state, config.n_max, config.resonance_width, c);
      break;
    case Model::fit:
      out.density = fit_density(energy);
      break;
    case Model::asymptote:
      out.density = high_e_asymptote(energy, state, c);
      break;
    case Model::low_asymptote:
      out.density = low_e_asymptote(energy, state, c);
      break;
    }
  } catch (const ResonanceError &) {
    out.density = kNaN;
    out.flags |= Flag::resonance;
  } catch (const std::range_error &) {
    out.density = kNaN;
    out.flags |= Flag::non_finite;
  }
  if (!std::isfinite(out.density))
    out.flags |= Flag::non_finite;
  return out;
}

SpectralCurve density_curve(const EnergyGrid &grid, const HydrogenState &state, Model model,
                            const EngineConfig &config) {
  config.validate();
  if (grid.back() > energy_ceiling(config.constants))
    throw std::invalid_argument("grid extends above mc^2");
  SpectralCurve curve{state, model, std::vector<SpectralSample>(grid.size())};
  parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    curve.samples[i] = model_density(grid[i], state, model, config);
  });
  return curve;
}

FractionCurve fraction_curve(const HydrogenState &state, const EnergyGrid &grid,
                             const EngineConfig &config, double e_min) {
  config.validate();
  const double mc2 = config.constants.mc2;
  if (!(grid.front() > e_min))
    throw std::invalid_argument("fraction grid must start above the low cutoff");
  if (grid.back() > energy_ceiling(config.constants))
    throw std::invalid_argument("grid extends above mc^2");

  // Piece i covers [edge[i], edge[i+1]]; the last one closes the range at mc^2.
  std::vector<double> edges{e_min};
  edges.insert(edges.end(), grid.points().begin(), grid.points().end());
  const bool closed = grid.back() >= mc2;
  if (!closed)
    edges.push_back(mc2);

  std::vector<ShiftResult> pieces(edges.size() - 1);
  parallel_for(pieces.size(), config.threads, [&](std::size_t i) {
    pieces[i] = total_shift(state, edges[i], edges[i + 1], config);
  });

  FractionCurve out{state, e_min, {}, {}};
  std::vector<double> cumulative(pieces.size());
  double running = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    running += pieces[i].value;
    cumulative[i] = running;
    out.total.error_estimate += pieces[i].error_estimate;
    out.total.integrand_evaluations += pieces[i].integrand_evaluations;
    out.total.flags |= pieces[i].flags;
  }
  out.total.value = running;

  FlagSet so_far;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    so_far |= pieces[i].flags;
    out.samples.push_back({grid[i], cumulative[i] / running, so_far});
  }
  return out;
}

} // namespace lshift
