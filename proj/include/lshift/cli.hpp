#pragma once

#include "lshift/engine.hpp"
#include "lshift/grid.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lshift::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFlags = 3;

enum class Command { density, total, fraction, compare, volume, fit_check };
enum class Format { csv, json };

std::string_view to_string(Command command);

struct GridSpec {
  GridScale scale = GridScale::log;
  double e_min = 1e-5;
  double e_max = 5.11e5;
  int count = 200;
};

struct RunConfig {
  Command command = Command::density;
  HydrogenState state{1, 0};
  std::optional<GridSpec> grid;
  std::vector<Model> models;
  double e_min = kDefaultLowCutoff;
  std::optional<double> e_max;
  std::vector<double> at;
  std::string output; // empty: standard output
  Format format = Format::csv;
  bool allow_flags = false;
  EngineConfig engine;
};

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

//! Environment lookup, injectable for tests.
using Environment = std::function<std::optional<std::string>(const std::string &)>;
Environment process_environment();

//! Parses argv-style arguments (without the program name). LSHIFT_* variables
//! supply tolerances unless the matching flag is given. Throws UsageError.
//! Returns nullopt when help was printed to `out`.
std::optional<RunConfig> parse_args(const std::vector<std::string> &args,
                                    const Environment &env, std::ostream &out);

//! Rendered artifact and the union of flags met while producing it.
struct Artifact {
  std::string text;
  FlagSet flags;
};

Artifact execute(const RunConfig &config);

//! Full command: parse, compute, write, map to an exit status.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
        const Environment &env = process_environment());

} // namespace lshift::cli
