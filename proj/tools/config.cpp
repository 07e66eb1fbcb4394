#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bosonic/error.hpp"

namespace bosonic::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "profile", "eta", "area_t_m2", "area_r_m2", "path_len_m", "omega_c_rad_s", "modes",
    "delta_omega", "n_modes", "detection", "power_ratio", "power_watts", "time_s",
    "energy_j", "from", "to", "points", "log", "quantity", "n_points", "si", "discrete"};

double number(const json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "key '" + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  return number(doc, key);
}

double required_number(const json& doc, const std::string& key, const std::string& profile) {
  if (!doc.contains(key)) {
    throw ConfigError(key, "missing key '" + key + "' required by profile '" + profile + "'");
  }
  return number(doc, key);
}

std::optional<long> optional_count(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "key '" + key + "' must be an integer");
  return v.get<long>();
}

std::optional<bool> optional_flag(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  const auto& v = doc.at(key);
  if (!v.is_boolean()) throw ConfigError(key, "key '" + key + "' must be true or false");
  return v.get<bool>();
}

std::optional<std::string> optional_string(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  const auto& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<ModeGrid> grid_from(const json& doc) {
  const auto delta = optional_number(doc, "delta_omega");
  const auto count = optional_count(doc, "n_modes");
  if (delta && !(*delta > 0.0)) throw ConfigError("delta_omega", "key 'delta_omega' must be positive");
  if (count && *count < 1) throw ConfigError("n_modes", "key 'n_modes' must be at least 1");
  if (!delta && !count) return std::nullopt;
  // n_modes == 0 marks "delta given, ladder unbounded".
  return ModeGrid{delta.value_or(0.0), count ? static_cast<std::size_t>(*count) : 0u};
}

std::vector<ModeSpec> modes_from(const json& doc) {
  if (!doc.contains("modes")) {
    throw ConfigError("modes", "missing key 'modes' required by profile 'tabulated'");
  }
  const auto& list = doc.at("modes");
  if (!list.is_array() || list.empty()) {
    throw ConfigError("modes", "key 'modes' must be a non-empty list of [omega, eta] pairs");
  }
  std::vector<ModeSpec> modes;
  for (const auto& pair : list) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ConfigError("modes", "key 'modes' entries must be [omega, eta] number pairs");
    }
    modes.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return modes;
}

template <typename Build>
ChannelModel build_model(const std::string& key, Build build) {
  try {
    return build();
  } catch (const bosonic::Error& e) {
    throw ConfigError(key, "key '" + key + "': " + e.what());
  }
}

}  // namespace

RunSettings RunSettings::merged_with(const RunSettings& o) const {
  RunSettings r = *this;
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(r.detection, o.detection);
  take(r.power_ratio, o.power_ratio);
  take(r.power_watts, o.power_watts);
  take(r.time_s, o.time_s);
  take(r.energy_j, o.energy_j);
  take(r.from, o.from);
  take(r.to, o.to);
  take(r.points, o.points);
  take(r.log_scale, o.log_scale);
  take(r.quantity, o.quantity);
  take(r.n_points, o.n_points);
  take(r.si, o.si);
  take(r.discrete, o.discrete);
  // A budget given on the command line replaces every budget key from the file.
  if (o.power_ratio || o.power_watts || o.energy_j) {
    r.power_ratio = o.power_ratio;
    r.power_watts = o.power_watts;
    r.energy_j = o.energy_j;
  }
  return r;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ChannelConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown key '" + key + "'");
  }
  if (!doc.contains("profile")) throw ConfigError("profile", "missing required key 'profile'");
  const auto profile = optional_string(doc, "profile").value();

  std::optional<ChannelModel> model;
  if (profile == "flat") {
    const double eta = required_number(doc, "eta", profile);
    const auto grid = grid_from(doc);
    if (grid && grid->delta_omega == 0.0) {
      throw ConfigError("delta_omega", "key 'n_modes' needs 'delta_omega' for profile 'flat'");
    }
    model = build_model("eta", [&] { return ChannelModel::flat(eta, grid); });
  } else if (profile == "farfield") {
    FarFieldGeometry g{required_number(doc, "area_t_m2", profile),
                       required_number(doc, "area_r_m2", profile),
                       required_number(doc, "path_len_m", profile),
                       required_number(doc, "omega_c_rad_s", profile)};
    for (const char* key : {"area_t_m2", "area_r_m2", "path_len_m", "omega_c_rad_s"}) {
      if (!(number(doc, key) > 0.0)) {
        throw ConfigError(key, std::string("key '") + key + "' must be positive");
      }
    }
    auto grid = grid_from(doc);
    if (grid && grid->delta_omega == 0.0) grid->delta_omega = g.omega_c / double(grid->n_modes);
    if (grid && grid->n_modes == 0) {
      throw ConfigError("n_modes", "key 'delta_omega' needs 'n_modes' for profile 'farfield'");
    }
    model = build_model("area_t_m2", [&] { return ChannelModel::far_field(g, grid); });
  } else if (profile == "tabulated") {
    for (const char* key : {"delta_omega", "n_modes"}) {
      if (doc.contains(key)) {
        throw ConfigError(key, std::string("key '") + key + "' conflicts with profile 'tabulated'");
      }
    }
    auto modes = modes_from(doc);
    model = build_model("modes", [&] { return ChannelModel::tabulated(std::move(modes)); });
  } else {
    throw ConfigError("profile", "key 'profile' must be one of flat, farfield, tabulated (got '" +
                                     profile + "')");
  }

  RunSettings s;
  s.detection = optional_string(doc, "detection");
  s.power_ratio = optional_number(doc, "power_ratio");
  s.power_watts = optional_number(doc, "power_watts");
  s.time_s = optional_number(doc, "time_s");
  s.energy_j = optional_number(doc, "energy_j");
  s.from = optional_number(doc, "from");
  s.to = optional_number(doc, "to");
  s.points = optional_count(doc, "points");
  s.log_scale = optional_flag(doc, "log");
  s.quantity = optional_string(doc, "quantity");
  s.n_points = optional_count(doc, "n_points");
  s.si = optional_flag(doc, "si");
  s.discrete = optional_flag(doc, "discrete");

  return ChannelConfig{*model, s, profile, fnv1a64(text)};
}

ChannelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace bosonic::cli
