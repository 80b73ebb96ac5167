#include "lshift/cli.hpp"

#include "lshift/models.hpp"
#include "lshift/vacuum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lshift::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string &text, const std::string &what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size())
      throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    throw UsageError("cannot read " + what + " from '" + text + "'");
  }
}

int parse_integer(const std::string &text, const std::string &what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size())
      throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    throw UsageError("cannot read " + what + " from '" + text + "'");
  }
}

GridSpec default_grid(Command command) {
  switch (command) {
  case Command::fraction:
    return {GridScale::log, 1e-3, 5.11e5, 100};
  case Command::volume:
    return {GridScale::log, 1e-3, 1e3, 100};
  default:
    return {GridScale::log, 1e-5, 5.11e5, 200};
  }
}

EnergyGrid build_grid(const RunConfig &config) {
  const auto spec = config.grid.value_or(default_grid(config.command));
  return make_grid(spec.e_min, spec.e_max, spec.count, spec.scale, config.engine.constants);
}

Json metadata(const RunConfig &config) {
  const auto &e = config.engine;
  const auto &c = e.constants;
  const auto &q = e.quadrature;
  Json m;
  m["state"] = {{"n", config.state.n()},
                {"l", config.state.l()},
                {"z", config.state.z()},
                {"label", config.state.label()}};
  m["constants"] = {{"alpha", c.alpha},
                    {"mc2_eV", c.mc2},
                    {"ground_binding_eV", c.ground_binding},
                    {"hbar_c_eV_A", c.hbar_c},
                    {"hbar_over_mc_fm", c.hbar_over_mc}};
  m["quadrature"] = {{"rule", std::string(to_string(q.rule))},
                     {"rel_tol", q.rel_tol},
                     {"abs_tol", q.abs_tol},
                     {"max_subdivisions", q.max_subdivisions},
                     {"s_truncation_epsilon", q.s_truncation_epsilon},
                     {"tail_split", q.tail_split}};
  Json low;
  low["mode"] = std::string(to_string(e.low_energy_mode));
  if (config.state.n() > 1) {
    const auto seam = low_energy_seam(config.state, e);
    low["seam_threshold_eV"] = seam.threshold;
    low["seam_continued_density"] = seam.continued;
    low["seam_asymptote_density"] = seam.asymptote;
    low["seam_relative_mismatch"] = seam.relative_mismatch;
  } else {
    low["seam_threshold_eV"] = nullptr;
  }
  m["low_energy"] = low;
  m["discrete_models"] = {{"n_max", e.n_max}, {"resonance_width_eV", e.resonance_width}};
  return m;
}

Json document(const RunConfig &config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = std::string(to_string(config.command));
  j["metadata"] = metadata(config);
  return j;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

struct CsvTable {
  std::string text;

  explicit CsvTable(const std::string &header) : text(header + "\n") {}
  void row(double e, double value, std::string_view tag, const std::string &flag) {
    text += fmt17(e) + "," + fmt17(value) + "," + std::string(tag) + "," + flag + "\n";
  }
};

std::vector<Model> models_or(const RunConfig &config, std::vector<Model> fallback) {
  return config.models.empty() ? fallback : config.models;
}

//==============================================================================
Artifact run_density(const RunConfig &config) {
  const auto grid = build_grid(config);
  Artifact a;
  CsvTable csv("E_eV,density,model,flag");
  auto j = document(config);
  j["curves"] = Json::array();
  for (Model model : models_or(config, {Model::gt})) {
    const auto curve = density_curve(grid, config.state, model, config.engine);
    Json samples = Json::array();
    for (const auto &s : curve.samples) {
      a.flags |= s.flags;
      csv.row(s.energy, s.density, to_string(model), s.flags.to_string());
      samples.push_back({{"E_eV", s.energy}, {"density", s.density},
                         {"flag", s.flags.to_string()}});
    }
    j["curves"].push_back({{"model", std::string(to_string(model))}, {"samples", samples}});
  }
  a.text = config.format == Format::csv ? csv.text : dump(j);
  return a;
}

Artifact run_total(const RunConfig &config) {
  const double e_max = config.e_max.value_or(config.engine.constants.mc2);
  const auto r = total_shift(config.state, config.e_min, e_max, config.engine);
  Artifact a;
  a.flags = r.flags;
  if (config.format == Format::csv) {
    CsvTable csv("E_eV,shift_eV,model,flag");
    csv.row(e_max, r.value, "gt", r.flags.to_string());
    a.text = csv.text;
  } else {
    auto j = document(config);
    j["result"] = {{"E_min_eV", config.e_min},
                   {"E_max_eV", e_max},
                   {"value_eV", r.value},
                   {"error_estimate_eV", r.error_estimate},
                   {"integrand_evaluations", r.integrand_evaluations},
                   {"flag", r.flags.to_string()}};
    a.text = dump(j);
  }
  return a;
}

Artifact run_fraction(const RunConfig &config) {
  const auto grid = build_grid(config);
  const auto curve = fraction_curve(config.state, grid, config.engine, config.e_min);
  Artifact a;
  a.flags = curve.total.flags;
  CsvTable csv("E_eV,fraction,model,flag");
  Json samples = Json::array();
  for (const auto &s : curve.samples) {
    csv.row(s.energy, s.fraction, "gt", s.flags.to_string());
    samples.push_back({{"E_eV", s.energy}, {"fraction", s.fraction},
                       {"flag", s.flags.to_string()}});
  }
  if (config.format == Format::csv) {
    a.text = csv.text;
  } else {
    auto j = document(config);
    j["total"] = {{"E_min_eV", curve.e_min},
                  {"E_max_eV", grid.back()},
                  {"value_eV", curve.total.value},
                  {"error_estimate_eV", curve.total.error_estimate},
                  {"flag", curve.total.flags.to_string()}};
    j["samples"] = samples;
    a.text = dump(j);
  }
  return a;
}

Artifact run_compare(const RunConfig &config) {
  if (config.at.empty())
    throw UsageError("compare needs at least one energy via --at");
  const auto models = models_or(config, {Model::gt, Model::welton, Model::asymptote});
  Artifact a;
  CsvTable csv("E_eV,density,model,flag");
  Json points = Json::array();
  for (double e : config.at) {
    std::optional<double> reference;
    std::vector<SpectralSample> row;
    for (Model model : models) {
      row.push_back(model_density(e, config.state, model, config.engine));
      if (model == Model::gt)
        reference = row.back().density;
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto &s = row[i];
      a.flags |= s.flags;
      csv.row(e, s.density, to_string(models[i]), s.flags.to_string());
      Json p = {{"E_eV", e},
                {"model", std::string(to_string(models[i]))},
                {"density", s.density},
                {"flag", s.flags.to_string()}};
      if (reference)
        p["relative_to_gt"] = (s.density - *reference) / std::abs(*reference);
      points.push_back(p);
    }
  }
  if (config.format == Format::csv) {
    a.text = csv.text;
  } else {
    auto j = document(config);
    j["points"] = points;
    a.text = dump(j);
  }
  return a;
}

Artifact run_volume(const RunConfig &config) {
  const auto grid = build_grid(config);
  Artifact a;
  std::string csv = "E_eV,volume_A3,radius_A,flag\n";
  Json samples = Json::array();
  for (double e : grid.points()) {
    VolumeSample v{e, std::nan(""), std::nan(""), {}};
    try {
      v = spectral_volume(e, config.state, config.engine);
    } catch (const std::domain_error &) {
      v.flags |= Flag::non_finite;
    }
    a.flags |= v.flags;
    csv += fmt17(e) + "," + fmt17(v.volume) + "," + fmt17(v.radius) + "," +
           v.flags.to_string() + "\n";
    samples.push_back({{"E_eV", e},
                       {"volume_A3", v.volume},
                       {"radius_A", v.radius},
                       {"flag", v.flags.to_string()}});
  }
  if (config.format == Format::csv) {
    a.text = csv;
  } else {
    auto j = document(config);
    j["samples"] = samples;
    a.text = dump(j);
  }
  return a;
}

Artifact run_fit_check(const RunConfig &config) {
  if (!(config.state == HydrogenState(1, 0, 1)))
    throw UsageError("fit-check applies to hydrogen 1S only");
  constexpr double kBound = 0.10;
  const auto grid = build_grid(config);
  const auto curve = density_curve(grid, config.state, Model::gt, config.engine);
  Artifact a;
  CsvTable csv("E_eV,relative_deviation,model,flag");
  double worst = 0.0;
  double worst_e = grid.front();
  for (const auto &s : curve.samples) {
    a.flags |= s.flags;
    const double dev = (fit_density(s.energy) - s.density) / s.density;
    csv.row(s.energy, dev, "fit", s.flags.to_string());
    if (std::abs(dev) > std::abs(worst)) {
      worst = dev;
      worst_e = s.energy;
    }
  }
  if (config.format == Format::csv) {
    a.text = csv.text;
  } else {
    auto j = document(config);
    const FitParameters p;
    j["fit"] = {{"A", p.a}, {"B", p.b}, {"C", p.c}};
    j["result"] = {{"max_relative_deviation", worst},
                   {"at_E_eV", worst_e},
                   {"bound", kBound},
                   {"within_bound", std::abs(worst) < kBound},
                   {"flag", a.flags.to_string()}};
    a.text = dump(j);
  }
  return a;
}

void apply_environment(const Environment &env, EngineConfig &e) {
  auto number = [&](const char *name, auto apply) {
    if (auto v = env(name))
      apply(*v, std::string(name));
  };
  number("LSHIFT_REL_TOL", [&](const std::string &v, const std::string &n) {
    e.quadrature.rel_tol = parse_number(v, n);
  });
  number("LSHIFT_ABS_TOL", [&](const std::string &v, const std::string &n) {
    e.quadrature.abs_tol = parse_number(v, n);
  });
  number("LSHIFT_MAX_SUBDIVISIONS", [&](const std::string &v, const std::string &n) {
    e.quadrature.max_subdivisions = parse_integer(v, n);
  });
  number("LSHIFT_S_EPSILON", [&](const std::string &v, const std::string &n) {
    e.quadrature.s_truncation_epsilon = parse_number(v, n);
  });
  number("LSHIFT_TAIL_SPLIT", [&](const std::string &v, const std::string &n) {
    e.quadrature.tail_split = parse_number(v, n);
  });
  number("LSHIFT_RULE", [&](const std::string &v, const std::string &) {
    e.quadrature.rule = parse_quadrature_rule(v);
  });
  number("LSHIFT_THREADS", [&](const std::string &v, const std::string &n) {
    e.threads = parse_integer(v, n);
  });
}

} // namespace

std::string_view to_string(Command command) {
  switch (command) {
  case Command::density:
    return "density";
  case Command::total:
    return "total";
  case Command::fraction:
    return "fraction";
  case Command::compare:
    return "compare";
  case Command::volume:
    return "volume";
  case Command::fit_check:
    return "fit-check";
  }
  return "?";
}

Environment process_environment() {
  return [](const std::string &name) -> std::optional<std::string> {
    if (const char *v = std::getenv(name.c_str()))
      return std::string(v);
    return std::nullopt;
  };
}

std::optional<RunConfig> parse_args(const std::vector<std::string> &args,
                                    const Environment &env, std::ostream &out) {
  CLI::App app{"Spectral density of hydrogenic radiative level shifts", "lshift"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::vector<int> state{1, 0};
  int z = 1;
  std::vector<std::string> models;
  std::vector<std::string> grid;
  double e_min = kDefaultLowCutoff;
  double e_max = 0.0;
  std::vector<double> at;
  std::string output;
  std::string format;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  int max_subdivisions = 0;
  double s_epsilon = 0.0;
  double tail_split = 0.0;
  std::string rule;
  bool allow_flags = false;
  int threads = 0;
  double binding = 0.0;
  std::string low_mode;
  double seam = 0.0;
  int n_max = 0;
  double width = 0.0;

  app.add_option("--state", state, "Level as N L")->expected(2);
  app.add_option("--z", z, "Nuclear charge");
  auto *model_opt = app.add_option("--model,--models", models,
                                   "gt, bethe, welton, power, fit, asymptote, low_asymptote")
                        ->delimiter(',');
  auto *grid_opt = app.add_option("--grid", grid, "SCALE MIN MAX COUNT (scale linear|log)")
                       ->expected(4);
  auto *emin_opt = app.add_option("--emin", e_min, "Lower energy bound [eV]");
  auto *emax_opt = app.add_option("--emax", e_max, "Upper energy bound [eV]");
  app.add_option("--at", at, "Energies for compare [eV]")->delimiter(',');
  app.add_option("--out", output, "Output file (default: standard output)");
  auto *format_opt = app.add_option("--format", format, "csv or json");
  auto *rel_opt = app.add_option("--rel-tol", rel_tol, "Relative tolerance");
  auto *abs_opt = app.add_option("--abs-tol", abs_tol, "Absolute tolerance");
  auto *sub_opt = app.add_option("--max-subdivisions", max_subdivisions, "Panel budget");
  auto *eps_opt = app.add_option("--s-epsilon", s_epsilon, "Tail series truncation");
  auto *split_opt = app.add_option("--tail-split", tail_split, "Start of the s tail");
  auto *rule_opt = app.add_option("--rule", rule, "gauss-kronrod or tanh-sinh");
  app.add_flag("--allow-flags", allow_flags, "Exit 0 even when results carry flags");
  auto *threads_opt = app.add_option("--threads", threads, "Worker threads (0: all cores)");
  auto *binding_opt = app.add_option("--binding-energy", binding, "|E_1| for Z = 1 [eV]");
  auto *mode_opt = app.add_option("--low-energy-mode", low_mode, "continuation or asymptote");
  auto *seam_opt = app.add_option("--seam-threshold", seam, "Low-energy seam [eV]");
  auto *nmax_opt = app.add_option("--n-max", n_max, "Highest level in discrete sums");
  auto *width_opt = app.add_option("--resonance-width", width, "Power-model exclusion [eV]");

  const std::pair<const char *, Command> commands[] = {
      {"density", Command::density}, {"total", Command::total},
      {"fraction", Command::fraction}, {"compare", Command::compare},
      {"volume", Command::volume},   {"fit-check", Command::fit_check},
  };
  const char *descriptions[] = {
      "Spectral density on a grid",      "Shift integrated over an energy range",
      "Cumulative fraction of the shift", "Several models at chosen energies",
      "Spectral volume and radius",      "Rational fit against the computed density",
  };
  std::vector<CLI::App *> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i)
    subs.push_back(app.add_subcommand(commands[i].first, descriptions[i]));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError &e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed())
      config.command = commands[i].second;

  try {
    config.state = HydrogenState(state[0], state[1], z);
    auto &e = config.engine;
    apply_environment(env, e);
    if (*binding_opt)
      e.constants.ground_binding = binding;
    if (*rel_opt)
      e.quadrature.rel_tol = rel_tol;
    if (*abs_opt)
      e.quadrature.abs_tol = abs_tol;
    if (*sub_opt)
      e.quadrature.max_subdivisions = max_subdivisions;
    if (*eps_opt)
      e.quadrature.s_truncation_epsilon = s_epsilon;
    if (*split_opt)
      e.quadrature.tail_split = tail_split;
    if (*rule_opt)
      e.quadrature.rule = parse_quadrature_rule(rule);
    if (*threads_opt)
      e.threads = threads;
    if (*mode_opt)
      e.low_energy_mode = parse_low_energy_mode(low_mode);
    if (*seam_opt)
      e.seam_threshold = seam;
    if (*nmax_opt)
      e.n_max = n_max;
    if (*width_opt)
      e.resonance_width = width;
    e.validate();

    if (*model_opt)
      for (const auto &m : models)
        config.models.push_back(parse_model(m));
    if (*grid_opt) {
      GridSpec g;
      g.scale = parse_grid_scale(grid[0]);
      g.e_min = parse_number(grid[1], "grid minimum");
      g.e_max = parse_number(grid[2], "grid maximum");
      g.count = parse_integer(grid[3], "grid count");
      make_grid(g.e_min, g.e_max, g.count, g.scale, e.constants);
      config.grid = g;
    }
    if (*emin_opt)
      config.e_min = e_min;
    if (*emax_opt)
      config.e_max = e_max;
    config.at = at;
    config.output = output;
    config.allow_flags = allow_flags;
    if (*format_opt) {
      if (format == "csv")
        config.format = Format::csv;
      else if (format == "json")
        config.format = Format::json;
      else
        throw UsageError("format must be csv or json");
    } else {
      const bool summary =
          config.command == Command::total || config.command == Command::fit_check;
      config.format = summary ? Format::json : Format::csv;
    }
  } catch (const UsageError &) {
    throw;
  } catch (const std::invalid_argument &ex) {
    throw UsageError(ex.what());
  }
  return config;
}

Artifact execute(const RunConfig &config) {
  switch (config.command) {
  case Command::density:
    return run_density(config);
  case Command::total:
    return run_total(config);
  case Command::fraction:
    return run_fraction(config);
  case Command::compare:
    return run_compare(config);
  case Command::volume:
    return run_volume(config);
  case Command::fit_check:
    return run_fit_check(config);
  }
  throw std::logic_error("unhandled command");
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        const Environment &env) {
  Artifact artifact;
  RunConfig config;
  try {
    auto parsed = parse_args(args, env, out);
    if (!parsed)
      return kExitOk;
    config = *parsed;
    artifact = execute(config);
  } catch (const std::invalid_argument &e) {
    err << "lshift: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error &e) {
    err << "lshift: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "lshift: error: " << e.what() << "\n";
    return kExitFailure;
  }

  if (config.output.empty()) {
    out << artifact.text;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    file << artifact.text;
    if (!file) {
      err << "lshift: cannot write " << config.output << "\n";
      return kExitFailure;
    }
  }
  if (artifact.flags.is_failure() && !config.allow_flags) {
    err << "lshift: results carry numerical flags (" << artifact.flags.to_string()
        << "); rerun with --allow-flags to accept them\n";
    return kExitFlags;
  }
  return kExitOk;
}

} // namespace lshift::cli
