#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"
#include "table.hpp"

using namespace nhkubo::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nhkubo_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> data_rows(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(CliFormat, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(CliConfig, LoadsFlatJson) {
  const fs::path p = scratch("cfg.json");
  std::ofstream(p) << R"({"m": 0.3, "gamma": 1.2, "framework": "phqm-j", "sweep": "m", "start": 0.1,
                         "stop": 0.5, "points": 5, "delta0": 1e-5, "format": "json"})";
  const RunConfig c = load_config(p.string());
  EXPECT_EQ(c.model.m, 0.3);
  EXPECT_EQ(c.model.gamma, 1.2);
  EXPECT_EQ(c.framework, "phqm-j");
  EXPECT_EQ(c.sweep.variable, "m");
  EXPECT_EQ(c.sweep.points, 5);
  EXPECT_DOUBLE_EQ(c.sweep.at(4), 0.5);
  EXPECT_EQ(c.delta0_value(), 1e-5);
  EXPECT_EQ(c.format, "json");
  EXPECT_NO_THROW(c.validate({"m"}));
  EXPECT_THROW(c.validate({"omega"}), ConfigError);
}

TEST(CliConfig, RejectsUnknownFieldsAndWrongTypes) {
  const fs::path p = scratch("bad.json");
  std::ofstream(p) << R"({"gama": 1.0})";
  EXPECT_THROW(load_config(p.string()), ConfigError);
  std::ofstream(p) << R"({"gamma": "large"})";
  EXPECT_THROW(load_config(p.string()), ConfigError);
  std::ofstream(p) << "[1, 2]";
  EXPECT_THROW(load_config(p.string()), ConfigError);
  EXPECT_THROW(load_config(scratch("missing.json").string()), ConfigError);
}

TEST(CliConfig, SweepInvariants) {
  RunConfig c;
  c.sweep = {"omega", 1.0, 1.0, 5};
  EXPECT_THROW(c.validate({"omega"}), ConfigError);
  c.sweep = {"omega", 0.0, 1.0, 1};
  EXPECT_THROW(c.validate({"omega"}), ConfigError);
  c.framework = "phqm";
  EXPECT_THROW(c.validate({"omega"}), ConfigError);
}

TEST(CliConfig, CleanPhqmUsesDelta0) {
  RunConfig c;
  c.framework = "phqm-tilde";
  c.model.gamma = 0.0;
  c.delta0 = 1e-4;
  EXPECT_EQ(c.effective_gamma(), 1e-4);
  c.framework = "standard";
  EXPECT_EQ(c.effective_gamma(), 0.0);
}

TEST(CliOutput, SweepsAreDeterministicAcrossWorkerCounts) {
  RunConfig c;
  c.framework = "phqm-j";
  c.model.gamma = 1.5;
  c.sweep = {"m", 0.0, 0.8, 3};
  c.out = scratch("dc_a.csv").string();
  c.workers = 1;
  ASSERT_EQ(cmd_sigma_dc(c), 0);
  c.out = scratch("dc_b.csv").string();
  c.workers = 3;
  ASSERT_EQ(cmd_sigma_dc(c), 0);
  const std::string a = slurp(scratch("dc_a.csv"));
  EXPECT_EQ(a, slurp(scratch("dc_b.csv")));
  EXPECT_NE(a.find("# delta0: 1e-06"), std::string::npos);
  EXPECT_NE(a.find("# k_rel_tol: 1e-08"), std::string::npos);
  const auto rows = data_rows(a);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_LT(r[4], 1e-6);  // rel_error column
}

TEST(CliOutput, SpectralRidgeTracksBands) {
  RunConfig c;
  c.model.gamma = 0.05;
  c.sweep = {"omega", 0.0, 3.0, 301};
  c.k_start = 0.0;
  c.k_stop = 2.0;
  c.k_points = 5;
  c.out = scratch("spectral.csv").string();
  ASSERT_EQ(cmd_spectral(c), 0);
  std::map<double, std::pair<double, double>> best;  // k -> (A, omega)
  for (const auto& r : data_rows(slurp(c.out))) {
    auto& b = best[r[1]];
    if (r[2] > b.first) b = {r[2], r[0]};
  }
  ASSERT_EQ(best.size(), 5u);
  for (const auto& [k, b] : best) EXPECT_NEAR(b.second, std::sqrt(k * k + 1.0), 0.011) << k;
}

TEST(CliOutput, SpectralTachyonicPanelHasImaginaryBands) {
  RunConfig c;
  c.model.m = 1.3;
  c.model.gamma = 1.5;
  c.sweep = {"omega", -1.0, 1.0, 3};
  c.k_start = -0.2;
  c.k_stop = 0.2;
  c.k_points = 3;
  c.out = scratch("tachyonic.csv").string();
  ASSERT_EQ(cmd_spectral(c), 0);
  for (const auto& r : data_rows(slurp(c.out))) EXPECT_GT(std::abs(r[4]), 0.5);
}

TEST(CliOutput, JsonCarriesMetadataAndRows) {
  RunConfig c;
  c.model.gamma = 1.5;
  c.format = "json";
  c.out = scratch("dc.json").string();
  ASSERT_EQ(cmd_sigma_dc(c), 0);
  const std::string j = slurp(c.out);
  EXPECT_NE(j.find("\"framework\": \"standard\""), std::string::npos);
  EXPECT_NE(j.find("0.384023212"), std::string::npos);
}

TEST(CliOutput, ConstraintViolationIsConfigError) {
  RunConfig c;
  c.model.m = 0.6;
  c.model.gamma = 0.5;
  EXPECT_THROW(cmd_sigma_dc(c), ConfigError);
  c.framework = "postselected";
  EXPECT_THROW(cmd_sigma(c), ConfigError);
}
