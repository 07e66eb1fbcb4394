#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "bosonic/allocator.hpp"
#include "bosonic/closedform.hpp"
#include "bosonic/error.hpp"

namespace bosonic::cli {

namespace {

constexpr long kDefaultSpectrumPoints = 200;

// Normalised problem ready for the solvers. Frequencies are in units of
// omega_ref and energies in hbar * omega_ref.
struct Problem {
  enum class Kind { FarFieldContinuum, FiniteModes, FlatLadder } kind;
  double power_ratio = 0.0;        // far-field continuum
  std::vector<ModeSpec> modes;     // finite grids
  FlatLadder ladder{1.0, 1.0};     // flat ladder
  double energy = 0.0;             // per use, finite grids and ladder
  double omega_ref = 1.0;          // rad/s
  bool far_field = false;
  double cutoff_fresnel = 1.0;     // far-field spectrum normalisation
  // Factor turning bits per use into the normalised reported rate; for the
  // far-field continuum the solver already reports the normalised rate.
  double per_use_to_normalized = 1.0;
  std::optional<double> bits_per_sec_scale;  // normalised rate -> bits/s
  std::optional<double> time_s;
  std::string normalized_unit;
};

struct Outcome {
  Detection detection;
  std::string method;
  double normalized_rate = 0.0;
  std::optional<double> y0;
  std::optional<double> beta;
  std::optional<double> omega_cut_ratio;
  std::optional<std::size_t> active_modes;
  std::optional<FarFieldSolution> farfield;
  std::vector<ModeSpec> modes;  // discrete solves
  Allocation allocation;
};

std::string quantity_name(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::PowerRatio: return "power_ratio";
    case SweepQuantity::Power: return "power_watts";
    case SweepQuantity::Energy: return "energy_j";
  }
  return "power_ratio";
}

SweepQuantity parse_quantity(const std::string& name) {
  if (name == "power-ratio" || name == "power_ratio") return SweepQuantity::PowerRatio;
  if (name == "power" || name == "power_watts") return SweepQuantity::Power;
  if (name == "energy" || name == "energy_j") return SweepQuantity::Energy;
  throw ConfigError("quantity", "key 'quantity' must be power-ratio, power or energy");
}

void require_positive_setting(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(key, std::string("key '") + key + "' must be positive");
  }
}

// Builds the normalised problem for one budget value.
Problem make_problem(const ChannelConfig& config, const RunSettings& s, SweepQuantity quantity,
                     double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(quantity_name(quantity), "key '" + quantity_name(quantity) +
                                                   "' must be finite and >= 0");
  }
  if (s.time_s) require_positive_setting(*s.time_s, "time_s");
  Problem p;
  p.time_s = s.time_s;
  const auto& profile = config.model.profile();

  if (const auto* g = std::get_if<FarFieldGeometry>(&profile)) {
    const double p0 = reference_power(*g);
    double ratio = value;
    if (quantity == SweepQuantity::Power) ratio = value / p0;
    if (quantity == SweepQuantity::Energy) {
      if (!s.time_s) throw ConfigError("time_s", "energy budget on a far-field channel needs 'time_s'");
      ratio = value / *s.time_s / p0;
    }
    p.omega_ref = g->omega_c;
    p.far_field = true;
    p.cutoff_fresnel = g->cutoff_fresnel();
    p.normalized_unit = "bits_per_omega_c_T_over_2pi";
    p.bits_per_sec_scale = g->omega_c / (2.0 * std::numbers::pi);
    p.power_ratio = ratio;
    if (!s.discrete.value_or(false)) {
      p.kind = Problem::Kind::FarFieldContinuum;
      return p;
    }
    const auto& grid = config.model.grid();
    if (!grid || grid->n_modes == 0) {
      throw ConfigError("n_modes", "discrete far-field evaluation needs 'n_modes'");
    }
    p.kind = Problem::Kind::FiniteModes;
    p.modes = UnitScale{g->omega_c}.normalize(discretize(config.model));
    // T = 2 pi / delta_omega; E = P T in hbar omega_c.
    const double delta = grid->delta_omega / g->omega_c;
    p.energy = ratio * p0 * (2.0 * std::numbers::pi / grid->delta_omega) /
               (constants::hbar * g->omega_c);
    p.per_use_to_normalized = delta;
    return p;
  }

  if (const auto* flat = std::get_if<FlatProfile>(&profile)) {
    const auto& grid = config.model.grid();
    if (!grid) throw ConfigError("delta_omega", "profile 'flat' needs 'delta_omega'");
    const UnitScale scale{grid->delta_omega};
    p.omega_ref = grid->delta_omega;
    // Per-use time in units of 1/delta_omega.
    const double time = s.time_s ? scale.time_to_internal(*s.time_s) : 2.0 * std::numbers::pi;
    switch (quantity) {
      case SweepQuantity::PowerRatio: p.energy = value * time; break;
      case SweepQuantity::Power: p.energy = scale.power_to_internal(value) * time; break;
      case SweepQuantity::Energy: p.energy = scale.energy_to_internal(value); break;
    }
    p.normalized_unit = "bits_per_use";
    p.bits_per_sec_scale = grid->delta_omega / time;
    if (grid->n_modes > 0) {
      p.kind = Problem::Kind::FiniteModes;
      p.modes = scale.normalize(discretize(config.model));
    } else {
      p.kind = Problem::Kind::FlatLadder;
      p.ladder = FlatLadder{flat->eta, 1.0};
    }
    return p;
  }

  const auto& tab = std::get<TabulatedProfile>(profile);
  const UnitScale scale{tab.modes.front().omega};
  p.omega_ref = scale.omega_ref;
  p.kind = Problem::Kind::FiniteModes;
  p.modes = scale.normalize(tab.modes);
  p.normalized_unit = "bits_per_use";
  switch (quantity) {
    case SweepQuantity::PowerRatio:
      throw ConfigError("power_ratio", "key 'power_ratio' is undefined for profile 'tabulated'");
    case SweepQuantity::Power:
      if (!s.time_s) throw ConfigError("time_s", "power budget on a tabulated channel needs 'time_s'");
      p.energy = scale.energy_to_internal(value * *s.time_s);
      break;
    case SweepQuantity::Energy: p.energy = scale.energy_to_internal(value); break;
  }
  if (s.time_s) p.bits_per_sec_scale = 1.0 / *s.time_s;
  return p;
}

Outcome solve(const Problem& p, Detection d, const numerics::Tolerance& tol) {
  Outcome o;
  o.detection = d;
  switch (p.kind) {
    case Problem::Kind::FarFieldContinuum: {
      const FarFieldSolution s = solve_farfield(p.power_ratio, d, tol);
      o.method = "closed-form";
      o.normalized_rate = s.normalized_rate;
      o.y0 = s.y0;
      o.omega_cut_ratio = s.omega_cut_ratio;
      o.farfield = s;
      return o;
    }
    case Problem::Kind::FiniteModes: {
      const auto r = capacity(p.modes, ResourceBudget::energy_per_use(p.energy), d);
      o.method = "discrete-grid";
      o.normalized_rate = r.value * p.per_use_to_normalized;
      o.beta = r.allocation.beta;
      o.active_modes = r.allocation.active_modes;
      o.modes = p.modes;
      o.allocation = r.allocation;
      return o;
    }
    case Problem::Kind::FlatLadder: {
      auto r = flat_ladder_capacity(p.ladder, ResourceBudget::energy_per_use(p.energy), d);
      o.method = "flat-ladder";
      o.normalized_rate = r.result.value * p.per_use_to_normalized;
      o.beta = r.result.allocation.beta;
      o.active_modes = r.result.allocation.active_modes;
      o.modes = std::move(r.modes);
      o.allocation = std::move(r.result.allocation);
      return o;
    }
  }
  return o;
}

struct Budget {
  SweepQuantity quantity;
  double value;
};

Budget single_budget(const RunSettings& s) {
  const int given = int(s.power_ratio.has_value()) + int(s.power_watts.has_value()) +
                    int(s.energy_j.has_value());
  if (given == 0) {
    throw ConfigError("power_ratio",
                      "a budget is required: --power-ratio, --power-watts or --energy-j");
  }
  if (given > 1) {
    throw ConfigError("power_ratio",
                      "give exactly one of --power-ratio, --power-watts, --energy-j");
  }
  if (s.power_ratio) return {SweepQuantity::PowerRatio, *s.power_ratio};
  if (s.power_watts) return {SweepQuantity::Power, *s.power_watts};
  return {SweepQuantity::Energy, *s.energy_j};
}

std::vector<Detection> detections_from(const RunSettings& s, const char* fallback) {
  return parse_detections(s.detection.value_or(fallback));
}

void write_metadata(std::ostream& out, const std::string& command, const ChannelConfig& config,
                    const numerics::Tolerance& tol) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config.content_hash));
  out << "# bosonic-capacity " << kToolVersion << "\n"
      << "# command=" << command << "\n"
      << "# profile=" << config.profile_name << "\n"
      << "# config_fnv1a64=" << hash << "\n"
      << "# quadrature_rel_tol=" << format_number(tol.rel) << "\n"
      << "# root_rel_tol=" << format_number(numerics::kDefaultRootTolerance.rel) << "\n";
}

void warn_far_field(const ChannelConfig& config, std::ostream& err) {
  if (const auto* g = std::get_if<FarFieldGeometry>(&config.model.profile())) {
    if (g->far_field_warning()) {
      err << "warning: D(omega_c) = " << g->cutoff_fresnel()
          << " exceeds 0.1; the far-field approximation is questionable\n";
    }
  }
}

bool use_si(const RunSettings& s) { return s.si.value_or(false); }

double reported_rate(const Problem& p, double normalized, bool si) {
  if (!si) return normalized;
  if (!p.bits_per_sec_scale) {
    throw ConfigError("time_s", "--si output for this channel needs 'time_s'");
  }
  return normalized * *p.bits_per_sec_scale;
}

std::string sweep_column_unit(const Problem& p, bool si) {
  return si || p.far_field ? "bits_per_sec" : "bits_per_use";
}

// Rows of the spectrum for one solved detection. Returns (omega/omega_ref,
// normalised S) pairs.
std::vector<SpectrumPoint> spectrum_rows(const Problem& p, const Outcome& o, std::size_t n) {
  if (o.farfield) return spectrum(*o.farfield, n);
  std::vector<ModeSpec> modes;
  if (p.kind == Problem::Kind::FlatLadder) {
    for (std::size_t k = 1; k <= n; ++k) modes.push_back({double(k), p.ladder.eta});
  } else {
    // Evenly strided sample of the grid that always ends on its last mode.
    const std::size_t size = p.modes.size();
    const std::size_t count = std::min(n, size);
    for (std::size_t i = 1; i <= count; ++i) {
      modes.push_back(p.modes[(i * size) / count - 1]);
    }
  }
  std::vector<double> photons(modes.size(), 0.0);
  if (std::isfinite(o.allocation.beta)) photons = photon_numbers(modes, o.allocation.beta, o.detection);
  const double scale = p.far_field ? p.cutoff_fresnel : 1.0;
  std::vector<SpectrumPoint> rows;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    rows.push_back({modes[k].omega, modes[k].omega * photons[k] * scale});
  }
  return rows;
}

void write_output(const std::string& text, const std::optional<std::filesystem::path>& path,
                  std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ConfigError("out", "cannot write '" + path->string() + "'");
  file << text;
}

std::string plot_script(const std::filesystem::path& csv, const std::string& command, bool log_x) {
  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "# Plot for " << csv.string() << " written by bosonic-capacity " << command << ".\n"
     << "import csv\n"
     << "import matplotlib\n"
     << "matplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\n\n"
     << "CSV = " << std::quoted(csv.string()) << "\n"
     << "with open(CSV) as f:\n"
     << "    rows = [r for r in csv.reader(f) if r and not r[0].startswith(\"#\")]\n"
     << "header, data = rows[0], rows[1:]\n"
     << "x = [float(r[0]) for r in data]\n"
     << "for j, name in enumerate(header[1:], start=1):\n"
     << "    plt.plot(x, [float(r[j]) for r in data], label=name)\n";
  if (log_x) py << "plt.xscale(\"log\")\n";
  py << "plt.xlabel(header[0])\n"
     << "plt.legend()\n"
     << "plt.savefig(CSV.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  return py.str();
}

}  // namespace

void SweepSpec::validate() const {
  if (points < 2) throw ConfigError("points", "key 'points' must be at least 2");
  if (!(from < to)) throw ConfigError("from", "sweep needs from < to");
  if (log_scale && !(from > 0.0)) throw ConfigError("from", "log sweep needs from > 0");
  if (!(from >= 0.0)) throw ConfigError("from", "sweep values must be >= 0");
}

std::vector<double> SweepSpec::values() const {
  validate();
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(points));
  const double last = static_cast<double>(points - 1);
  for (long i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / last;
    v.push_back(log_scale ? from * std::pow(to / from, f) : from + f * (to - from));
  }
  v.back() = to;
  return v;
}

std::vector<Detection> parse_detections(const std::string& name) {
  if (name == "all") return {Detection::Holevo, Detection::Heterodyne, Detection::Homodyne};
  if (const auto d = parse_detection(name)) return {*d};
  throw ConfigError("detection", "key 'detection' must be holevo, het, hom or all (got '" + name + "')");
}

numerics::Tolerance tolerance_from_environment() {
  numerics::Tolerance tol = numerics::kDefaultQuadratureTolerance;
  if (const char* env = std::getenv("BOSONIC_CAPACITY_TOL")) {
    const std::string_view text(env);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0)) {
      throw ConfigError("BOSONIC_CAPACITY_TOL",
                        "BOSONIC_CAPACITY_TOL must be a positive number (got '" + std::string(text) + "')");
    }
    tol.rel = value;
  }
  return tol;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void cmd_capacity(const ChannelConfig& config, const RunSettings& s, const numerics::Tolerance& tol,
                  std::ostream& out, std::ostream& err) {
  const Budget budget = single_budget(s);
  const Problem p = make_problem(config, s, budget.quantity, budget.value);
  const bool si = use_si(s);
  warn_far_field(config, err);

  std::ostringstream text;
  write_metadata(text, "capacity", config, tol);
  for (Detection d : detections_from(s, "holevo")) {
    const Outcome o = solve(p, d, tol);
    text << "detection=" << to_string(d) << "\n"
         << "method=" << o.method << "\n"
         << quantity_name(budget.quantity) << "=" << format_number(budget.value) << "\n"
         << "rate=" << format_number(reported_rate(p, o.normalized_rate, si)) << "\n"
         << "unit=" << (si ? "bits_per_second" : p.normalized_unit) << "\n";
    if (o.y0) text << "y0=" << format_number(*o.y0) << "\n";
    if (o.beta) text << "beta=" << format_number(*o.beta) << "\n";
    if (o.omega_cut_ratio) {
      text << "omega_cut_over_omega_c=" << format_number(*o.omega_cut_ratio) << "\n";
    }
    text << "active_modes=" << (o.active_modes ? std::to_string(*o.active_modes) : "continuum")
         << "\n";
    if (si && p.time_s) {
      text << "total_bits=" << format_number(reported_rate(p, o.normalized_rate, true) * *p.time_s)
           << "\n";
    }
    if (d == Detection::Holevo && p.kind == Problem::Kind::FlatLadder &&
        budget.quantity != SweepQuantity::Energy) {
      const double time = p.time_s ? *p.time_s * p.omega_ref : 2.0 * std::numbers::pi;
      text << "continuum_rate="
           << format_number(flat_broadband_capacity_internal(p.ladder.eta, p.energy / time, time))
           << "\n";
    }
    text << "\n";
  }
  out << text.str();
}

void cmd_sweep(const ChannelConfig& config, const RunSettings& s, const numerics::Tolerance& tol,
               std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  const bool tabulated = std::holds_alternative<TabulatedProfile>(config.model.profile());
  spec.quantity = s.quantity ? parse_quantity(*s.quantity)
                             : (tabulated ? SweepQuantity::Energy : SweepQuantity::PowerRatio);
  if (!s.from) throw ConfigError("from", "sweep needs --from");
  if (!s.to) throw ConfigError("to", "sweep needs --to");
  if (!s.points) throw ConfigError("points", "sweep needs --points");
  spec.from = *s.from;
  spec.to = *s.to;
  spec.points = *s.points;
  spec.log_scale = s.log_scale.value_or(false);
  const auto values = spec.values();
  const auto detections = detections_from(s, "all");
  const bool si = use_si(s);
  warn_far_field(config, err);

  // Points are independent; evaluate them on a small worker pool and emit in
  // sweep order.
  std::vector<std::vector<double>> rows(values.size());
  std::string column_unit;
  {
    const Problem probe = make_problem(config, s, spec.quantity, values.front());
    column_unit = sweep_column_unit(probe, si);
  }
  const auto evaluate = [&](std::size_t i) {
    const Problem p = make_problem(config, s, spec.quantity, values[i]);
    std::vector<double> row{values[i]};
    for (Detection d : detections) {
      row.push_back(reported_rate(p, solve(p, d, tol).normalized_rate, si));
    }
    rows[i] = std::move(row);
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, values.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < values.size(); i += workers) evaluate(i);
    }));
  }
  for (auto& job : jobs) job.get();

  std::ostringstream text;
  write_metadata(text, "sweep", config, tol);
  text << "# scale=" << (spec.log_scale ? "log" : "linear") << "\n";
  text << quantity_name(spec.quantity);
  for (Detection d : detections) text << "," << to_string(d) << "_" << column_unit;
  text << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) text << (j ? "," : "") << format_number(row[j]);
    text << "\n";
  }
  out << text.str();
}

void cmd_spectrum(const ChannelConfig& config, const RunSettings& s, const numerics::Tolerance& tol,
                  std::ostream& out, std::ostream& err) {
  const Budget budget = single_budget(s);
  const Problem p = make_problem(config, s, budget.quantity, budget.value);
  const long n = s.n_points.value_or(kDefaultSpectrumPoints);
  if (n < 1) throw ConfigError("n_points", "key 'n_points' must be at least 1");
  const auto detections = detections_from(s, "holevo");
  const bool si = use_si(s);
  const bool farfield = std::holds_alternative<FarFieldGeometry>(config.model.profile());
  warn_far_field(config, err);

  std::vector<std::vector<SpectrumPoint>> columns;
  std::vector<std::optional<double>> cuts;
  for (Detection d : detections) {
    const Outcome o = solve(p, d, tol);
    columns.push_back(spectrum_rows(p, o, static_cast<std::size_t>(n)));
    cuts.push_back(o.omega_cut_ratio);
  }

  // S is normalised by omega_ref, and additionally multiplied by D(omega_c)
  // for far-field channels.
  const double s_to_si = farfield ? p.omega_ref / p.cutoff_fresnel : p.omega_ref;

  std::ostringstream text;
  write_metadata(text, "spectrum", config, tol);
  text << "# " << quantity_name(budget.quantity) << "=" << format_number(budget.value) << "\n";
  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (cuts[j]) {
      text << "# omega_cut_over_omega_c_" << to_string(detections[j]) << "="
           << format_number(*cuts[j]) << "\n";
    }
  }
  text << (si ? "omega_rad_s" : "omega_over_omega_c");
  if (detections.size() == 1) {
    text << (si ? ",S_rad_s" : ",S_normalized");
  } else {
    for (Detection d : detections) text << (si ? ",S_rad_s_" : ",S_normalized_") << to_string(d);
  }
  text << "\n";
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    const double w = columns.front()[i].omega;
    text << format_number(si ? w * p.omega_ref : w);
    for (const auto& col : columns) {
      text << "," << format_number(si ? col[i].power * s_to_si : col[i].power);
    }
    text << "\n";
  }
  out << text.str();
}

int run(const Options& options, std::ostream& out, std::ostream& err) {
  try {
    if (!options.config_path) throw ConfigError("config", "--config PATH is required");
    const ChannelConfig config = load_config(*options.config_path);
    const RunSettings settings = config.settings.merged_with(options.settings);
    const numerics::Tolerance tol = tolerance_from_environment();
    if (options.plot_script && !options.out) {
      throw ConfigError("plot_script", "--plot-script needs --out so the script can find the CSV");
    }

    std::ostringstream text;
    if (options.command == "capacity") {
      cmd_capacity(config, settings, tol, text, err);
    } else if (options.command == "sweep") {
      cmd_sweep(config, settings, tol, text, err);
    } else if (options.command == "spectrum") {
      cmd_spectrum(config, settings, tol, text, err);
    } else {
      throw ConfigError("command", "unknown command '" + options.command + "'");
    }
    write_output(text.str(), options.out, out);
    if (options.plot_script) {
      const bool log_x = options.command == "sweep" && settings.log_scale.value_or(false);
      write_output(plot_script(*options.out, options.command, log_x), options.plot_script, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    // Input-domain violations surface from the model constructors; treat them
    // as configuration problems. Everything else is a solver failure.
    if (e.code() == Errc::DomainError || e.code() == Errc::ProfileMismatch) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace bosonic::cli
