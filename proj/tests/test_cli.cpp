#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bosonic/closedform.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace bosonic::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bosonic_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("BOSONIC_CAPACITY_TOL");
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  struct Result {
    int code;
    std::string out;
    std::string err;
  };

  Result invoke(Options options) {
    std::ostringstream out, err;
    const int code = run(options, out, err);
    return {code, out.str(), err.str()};
  }

  static std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
  }

  fs::path dir_;
};

constexpr const char* kFarField = R"({"profile": "farfield", "area_t_m2": 0.01, "area_r_m2": 0.01,
  "path_len_m": 1.0e5, "omega_c_rad_s": 1.2e15, "n_modes": 2000})";

TEST_F(CliTest, CapacityFlatSingleModeTwoBits) {
  Options o;
  o.command = "capacity";
  o.config_path = write("nb.json", R"({"profile": "flat", "eta": 1.0, "delta_omega": 1e15, "n_modes": 1})");
  o.settings.energy_j = 1.054571817e-34 * 1e15;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(std::stod(value_of(r.out, "rate")), 2.0, 1e-12);
  EXPECT_EQ(value_of(r.out, "unit"), "bits_per_use");
  EXPECT_EQ(value_of(r.out, "active_modes"), "1");
}

TEST_F(CliTest, CapacityFarFieldPassesThroughClosedForm) {
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_ratio = 3.0;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto direct = solve_farfield(3.0, Detection::Holevo, tolerance_from_environment());
  EXPECT_EQ(value_of(r.out, "rate"), format_number(direct.normalized_rate));
  EXPECT_EQ(value_of(r.out, "y0"), format_number(direct.y0));
}

TEST_F(CliTest, CapacitySiMatchesGeometryEntryPoint) {
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_watts = 1e-9;
  o.settings.time_s = 2.0;
  o.settings.si = true;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto cfg = load_config(*o.config_path);
  const auto& g = std::get<FarFieldGeometry>(cfg.model.profile());
  const auto direct = farfield_capacity(g, 1e-9, 2.0, tolerance_from_environment());
  EXPECT_NEAR(std::stod(value_of(r.out, "rate")), direct.rate_bits_per_sec, 1e-12 * direct.rate_bits_per_sec);
  EXPECT_NEAR(std::stod(value_of(r.out, "total_bits")), direct.total_bits, 1e-12 * direct.total_bits);
  EXPECT_EQ(value_of(r.out, "unit"), "bits_per_second");
}

TEST_F(CliTest, DiscreteFarFieldCloseToContinuum) {
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_ratio = 3.0;
  o.settings.discrete = true;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(value_of(r.out, "method"), "discrete-grid");
  EXPECT_NEAR(std::stod(value_of(r.out, "rate")), 2.2950814630730997, 0.005 * 2.295);
}

TEST_F(CliTest, MissingProfileIsConfigError) {
  Options o;
  o.command = "capacity";
  o.config_path = write("bad.json", R"({"eta": 0.5})");
  o.settings.power_ratio = 1.0;
  const auto r = invoke(o);
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("profile"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsNameTheKey) {
  const std::pair<const char*, const char*> cases[] = {
      {R"({"profile": "farfield", "area_t_m2": 1, "area_r_m2": 1, "path_len_m": 1})", "omega_c_rad_s"},
      {R"({"profile": "flat", "eta": "high", "delta_omega": 1})", "eta"},
      {R"({"profile": "flat", "eta": 2.0, "delta_omega": 1})", "eta"},
      {R"({"profile": "tabulated", "modes": [[1, 0.5]], "n_modes": 3})", "n_modes"},
      {R"({"profile": "tabulated", "modes": [[2, 0.5], [1, 0.5]]})", "modes"},
      {R"({"profile": "flat", "eta": 0.5, "delta_omega": 1, "colour": 1})", "colour"},
      {R"({"profile": "warp"})", "profile"},
  };
  for (const auto& [text, key] : cases) {
    try {
      parse_config(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.key(), key) << text;
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST_F(CliTest, FlagsOverrideConfig) {
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", R"({"profile": "farfield", "area_t_m2": 0.01, "area_r_m2": 0.01,
    "path_len_m": 1.0e5, "omega_c_rad_s": 1.2e15, "power_ratio": 1.0, "detection": "het"})");
  auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(value_of(r.out, "detection"), "heterodyne");
  EXPECT_EQ(value_of(r.out, "power_ratio"), format_number(1.0));

  o.settings.power_ratio = 3.0;
  o.settings.detection = "hom";
  r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(value_of(r.out, "detection"), "homodyne");
  EXPECT_EQ(value_of(r.out, "power_ratio"), format_number(3.0));

  // A watts budget on the command line displaces the file's power_ratio.
  o.settings = {};
  o.settings.power_watts = 1e-12;
  r = invoke(o);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(value_of(r.out, "power_watts"), format_number(1e-12));
}

TEST_F(CliTest, BudgetFlagsAreExclusive) {
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", kFarField);
  EXPECT_EQ(invoke(o).code, kExitConfig);
  o.settings.power_ratio = 1.0;
  o.settings.energy_j = 1.0;
  EXPECT_EQ(invoke(o).code, kExitConfig);
}

TEST_F(CliTest, SweepHeaderAndRows) {
  Options o;
  o.command = "sweep";
  o.config_path = write("ff.json", kFarField);
  o.settings.from = 1.0;
  o.settings.to = 10.0;
  o.settings.points = 2;
  o.settings.log_scale = true;
  o.settings.detection = "all";
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::vector<std::string> data;
  std::string header;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) header = line; else data.push_back(line);
  }
  EXPECT_EQ(header, "power_ratio,holevo_bits_per_sec,heterodyne_bits_per_sec,homodyne_bits_per_sec");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data[0].substr(0, data[0].find(',')), format_number(1.0));
  EXPECT_EQ(data[1].substr(0, data[1].find(',')), format_number(10.0));
}

TEST_F(CliTest, SweepSubsetOfDetections) {
  Options o;
  o.command = "sweep";
  o.config_path = write("ff.json", kFarField);
  o.settings.from = 0.0;
  o.settings.to = 1.0;
  o.settings.points = 3;
  o.settings.detection = "het";
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\npower_ratio,heterodyne_bits_per_sec\n"), std::string::npos);
}

TEST_F(CliTest, SweepSpecValidation) {
  Options o;
  o.command = "sweep";
  o.config_path = write("ff.json", kFarField);
  o.settings.from = 0.0;
  o.settings.to = 1.0;
  o.settings.points = 5;
  o.settings.log_scale = true;
  EXPECT_EQ(invoke(o).code, kExitConfig);  // log needs from > 0
  o.settings.log_scale = false;
  o.settings.points = 1;
  EXPECT_EQ(invoke(o).code, kExitConfig);
  o.settings.points = 3;
  o.settings.from = 2.0;
  EXPECT_EQ(invoke(o).code, kExitConfig);
}

TEST_F(CliTest, SweepIsDeterministicAndLocaleFree) {
  Options o;
  o.command = "sweep";
  o.config_path = write("ff.json", kFarField);
  o.settings.from = 0.01;
  o.settings.to = 1000.0;
  o.settings.points = 20;
  o.settings.log_scale = true;
  const auto a = invoke(o), b = invoke(o);
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("# config_fnv1a64="), std::string::npos);
  EXPECT_NE(a.out.find("# quadrature_rel_tol="), std::string::npos);
  EXPECT_NE(a.out.find("# bosonic-capacity "), std::string::npos);
}

TEST_F(CliTest, SpectrumCutoffRowsAreExactlyZero) {
  Options o;
  o.command = "spectrum";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_ratio = 3.0;
  o.settings.detection = "het";
  o.settings.n_points = 100;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const double cut = solve_farfield(3.0, Detection::Heterodyne).omega_cut_ratio.value();
  std::istringstream in(r.out);
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line[0] == 'o') continue;
    const auto comma = line.find(',');
    const double w = std::stod(line.substr(0, comma));
    const std::string s = line.substr(comma + 1);
    if (w < cut) EXPECT_EQ(s, format_number(0.0)) << line;
    else EXPECT_GT(std::stod(s), 0.0) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 100);
  EXPECT_NE(r.out.find("\nomega_over_omega_c,S_normalized\n"), std::string::npos);
}

TEST_F(CliTest, SpectrumSinglePointSitsAtCutoffFrequency) {
  Options o;
  o.command = "spectrum";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_ratio = 3.0;
  o.settings.n_points = 1;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto last_line = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  EXPECT_EQ(last_line.substr(0, last_line.find(',')), format_number(1.0));
}

TEST_F(CliTest, SpectrumFlatHolevoDecreasing) {
  Options o;
  o.command = "spectrum";
  o.config_path = write("flat.json", R"({"profile": "flat", "eta": 0.5, "delta_omega": 1e9})");
  o.settings.power_ratio = 50.0;
  o.settings.n_points = 30;
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  double prev = INFINITY;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line[0] == 'o') continue;
    const double s = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST_F(CliTest, OutAndPlotScript) {
  Options o;
  o.command = "sweep";
  o.config_path = write("ff.json", kFarField);
  o.settings.from = 0.1;
  o.settings.to = 10.0;
  o.settings.points = 4;
  o.settings.log_scale = true;
  o.plot_script = dir_ / "plot.py";
  EXPECT_EQ(invoke(o).code, kExitConfig);  // script needs --out
  o.out = dir_ / "fig1.csv";
  const auto r = invoke(o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream script(dir_ / "plot.py");
  std::stringstream text;
  text << script.rdbuf();
  EXPECT_NE(text.str().find("fig1.csv"), std::string::npos);
  EXPECT_NE(text.str().find("xscale(\"log\")"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "fig1.csv"));
}

TEST_F(CliTest, ToleranceEnvironmentOverride) {
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_ratio = 3.0;
  setenv("BOSONIC_CAPACITY_TOL", "1e-12", 1);
  auto r = invoke(o);
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("# quadrature_rel_tol=" + format_number(1e-12)), std::string::npos);
  setenv("BOSONIC_CAPACITY_TOL", "fast", 1);
  r = invoke(o);
  EXPECT_EQ(r.code, kExitConfig);
  unsetenv("BOSONIC_CAPACITY_TOL");
}

TEST_F(CliTest, SolverFailureExitsTwo) {
  // Tolerance far below double resolution with a budget of a single
  // quadrature subinterval cannot converge.
  Options o;
  o.command = "capacity";
  o.config_path = write("ff.json", kFarField);
  o.settings.power_ratio = 3.0;
  setenv("BOSONIC_CAPACITY_TOL", "1e-300", 1);
  const auto r = invoke(o);
  unsetenv("BOSONIC_CAPACITY_TOL");
  EXPECT_EQ(r.code, kExitSolver) << r.out;
  EXPECT_NE(r.err.find("solver error"), std::string::npos);
}

TEST_F(CliTest, TabulatedNeedsEnergy) {
  Options o;
  o.command = "capacity";
  o.config_path = write("tab.json", R"({"profile": "tabulated", "modes": [[1e15, 1.0], [2e15, 0.5]]})");
  o.settings.power_ratio = 1.0;
  EXPECT_EQ(invoke(o).code, kExitConfig);
  o.settings = {};
  o.settings.energy_j = 1.054571817e-34 * 1e15;
  o.settings.detection = "all";
  const auto r = invoke(o);
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(Formatting, FullPrecisionScientific) {
  EXPECT_EQ(format_number(1.0), "1.0000000000000000e+00");
  EXPECT_EQ(format_number(0.1), "1.0000000000000001e-01");
  EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
}

TEST(SweepSpecValues, EndpointsExact) {
  SweepSpec spec{SweepQuantity::PowerRatio, 0.01, 1000.0, 60, true};
  const auto v = spec.values();
  ASSERT_EQ(v.size(), 60u);
  EXPECT_EQ(v.front(), 0.01);
  EXPECT_EQ(v.back(), 1000.0);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]);
}

}  // namespace
}  // namespace bosonic::cli
