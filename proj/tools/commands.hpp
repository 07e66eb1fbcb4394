#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bosonic/kernels.hpp"
#include "bosonic/numerics.hpp"
#include "config.hpp"

namespace bosonic::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2 };

struct Options {
  std::string command;  // capacity | sweep | spectrum
  std::optional<std::filesystem::path> config_path;
  RunSettings settings;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> plot_script;
};

enum class SweepQuantity { PowerRatio, Power, Energy };

struct SweepSpec {
  SweepQuantity quantity = SweepQuantity::PowerRatio;
  double from = 0.0;
  double to = 0.0;
  long points = 0;
  bool log_scale = false;

  /// ConfigError unless from < to, points >= 2 and (log => from > 0).
  void validate() const;
  std::vector<double> values() const;
};

/// "holevo", "het", "hom" or "all".
std::vector<Detection> parse_detections(const std::string& name);

/// Relative quadrature tolerance, overridden by BOSONIC_CAPACITY_TOL.
numerics::Tolerance tolerance_from_environment();

/// Full double precision, scientific, locale independent.
std::string format_number(double value);

// The cmd_* functions throw ConfigError or bosonic::Error; run() maps those to
// exit codes.

void cmd_capacity(const ChannelConfig& config, const RunSettings& settings,
                  const numerics::Tolerance& tol, std::ostream& out, std::ostream& err);
void cmd_sweep(const ChannelConfig& config, const RunSettings& settings,
               const numerics::Tolerance& tol, std::ostream& out, std::ostream& err);
void cmd_spectrum(const ChannelConfig& config, const RunSettings& settings,
                  const numerics::Tolerance& tol, std::ostream& out, std::ostream& err);

/// Loads the config, layers the flags over it, dispatches on the command and
/// writes to `out` (or to options.out). Never throws; returns the exit code.
int run(const Options& options, std::ostream& out, std::ostream& err);

}  // namespace bosonic::cli
