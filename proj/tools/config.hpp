#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bosonic/channel.hpp"

namespace bosonic::cli {

/// Bad or missing configuration. `key()` names the offending key (empty for
/// file-level problems such as unreadable files or malformed JSON).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Run parameters shared by the config file and the command line. Every field
/// is optional so the two sources can be layered (flags win).
struct RunSettings {
  std::optional<std::string> detection;
  std::optional<double> power_ratio;
  std::optional<double> power_watts;
  std::optional<double> time_s;
  std::optional<double> energy_j;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<long> points;
  std::optional<bool> log_scale;
  std::optional<std::string> quantity;
  std::optional<long> n_points;
  std::optional<bool> si;
  std::optional<bool> discrete;

  /// Fields set in `overrides` replace ours.
  RunSettings merged_with(const RunSettings& overrides) const;
};

struct ChannelConfig {
  ChannelModel model;
  RunSettings settings;
  std::string profile_name;
  std::uint64_t content_hash = 0;  // FNV-1a 64 of the raw file bytes
};

/// Parses the JSON channel configuration. Recognised keys: profile, eta,
/// area_t_m2, area_r_m2, path_len_m, omega_c_rad_s, modes, delta_omega,
/// n_modes, plus the flag equivalents detection, power_ratio, power_watts,
/// time_s, energy_j, from, to, points, log, quantity, n_points, si, discrete.
ChannelConfig parse_config(std::string_view text);

ChannelConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace bosonic::cli
