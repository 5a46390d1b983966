#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpbif/model.hpp"
#include "hpbif/tolerances.hpp"

namespace hpbif::cli {

/// Settings shared by every subcommand. Parameter defaults are the field
/// table; command-line flags override values read from a config file.
struct RunConfig {
  ModelParams params;
  ToleranceSettings tol;
  std::size_t sigma_points = 200;
  std::optional<double> sigma_k1_min;
  std::optional<double> sigma_k1_max;
  double t_end = 100.0;
  /// Output spacing for `simulate` (0 records every integrator step).
  double sample_dt = 0.1;
  unsigned threads = 1;
};

/// Keys accepted by parse_config besides the twelve model parameters.
std::vector<std::string_view> setting_keys();

/// Parses `key = value` lines with `#` comments on top of `base`. Throws
/// Error(Parse) naming the line on unknown keys, malformed numbers,
/// non-positive parameters and unordered ranges.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Assigns one key; `line` is only used in error messages.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value,
                   std::size_t line);

/// Fixed CSV number format: 10 significant digits, scientific notation.
std::string format_number(double x);

/// Runs the command line (args excludes the program name). CSV goes to
/// `out` unless -o is given, messages and errors to `err`. Returns 0 on
/// success, 1 on usage or input errors, 2 on numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace hpbif::cli
