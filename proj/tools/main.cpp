#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using bosonic::cli::Options;

  CLI::App app{"Classical capacity of multimode lossy bosonic channels"};
  app.set_version_flag("--version", std::string(bosonic::cli::kToolVersion));
  app.require_subcommand(1);

  Options options;
  std::string config, out, plot;
  double power_ratio = 0, power_watts = 0, time_s = 0, energy_j = 0, from = 0, to = 0;
  long points = 0, n_points = 0;
  std::string detection, quantity;
  bool log_scale = false, si = false, discrete = false;

  const std::pair<const char*, const char*> commands[] = {
      {"capacity", "Capacity for one budget"},
      {"sweep", "CSV of capacity over a range of budgets"},
      {"spectrum", "CSV of the optimal power spectrum"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Channel configuration (JSON)");
    sub->add_option("--detection", detection, "holevo | het | hom | all");
    sub->add_option("--power-ratio", power_ratio, "Power in units of the reference power");
    sub->add_option("--power-watts", power_watts, "Transmitted power in W");
    sub->add_option("--time-s", time_s, "Transmission time in s");
    sub->add_option("--energy-j", energy_j, "Mean energy per channel use in J");
    sub->add_flag("--si", si, "Report SI units instead of normalised ones");
    sub->add_flag("--discrete", discrete, "Far-field: solve on the configured mode grid");
    sub->add_option("--out", out, "Write output to PATH instead of stdout");
    sub->add_option("--plot-script", plot, "Also write a matplotlib script for the CSV");
    if (std::string(name) == "sweep") {
      sub->add_option("--from", from, "Sweep start");
      sub->add_option("--to", to, "Sweep end");
      sub->add_option("--points", points, "Number of sweep points (>= 2)");
      sub->add_flag("--log", log_scale, "Logarithmic spacing");
      sub->add_option("--quantity", quantity, "power-ratio | power | energy");
    }
    if (std::string(name) == "spectrum") {
      sub->add_option("--n-points", n_points, "Number of spectrum samples");
    }
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  options.command = sub->get_name();
  auto given = [sub](const char* flag) { return sub->count(flag) > 0; };
  auto& s = options.settings;
  if (given("--config")) options.config_path = config;
  if (given("--out")) options.out = out;
  if (given("--plot-script")) options.plot_script = plot;
  if (given("--detection")) s.detection = detection;
  if (given("--power-ratio")) s.power_ratio = power_ratio;
  if (given("--power-watts")) s.power_watts = power_watts;
  if (given("--time-s")) s.time_s = time_s;
  if (given("--energy-j")) s.energy_j = energy_j;
  if (given("--si")) s.si = si;
  if (given("--discrete")) s.discrete = discrete;
  if (options.command == "sweep") {
    if (given("--from")) s.from = from;
    if (given("--to")) s.to = to;
    if (given("--points")) s.points = points;
    if (given("--log")) s.log_scale = log_scale;
    if (given("--quantity")) s.quantity = quantity;
  }
  if (options.command == "spectrum" && given("--n-points")) s.n_points = n_points;

  return bosonic::cli::run(options, std::cout, std::cerr);
}
