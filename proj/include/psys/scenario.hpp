#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "psys/blowup.hpp"
#include "psys/small_data.hpp"

namespace psys {

struct PatternConfig {
  double epsilon = 0.0;  // 0: halving search
  double split = 0.5;
  double alpha = 0.01;
  int K = 100;
  int periods = 5;
  double period = 1.0;
  double lambda = 0.0;  // periodic runs; 0: default drift
};

struct RiemannConfig {
  double left_u = 0.0;
  double left_h = 1.0;
  double right_u = 0.0;
  double right_h = 1.0;
};

struct SuiteConfig {
  int runs = 100;
  SmallDataOptions data;
  double slack = 1e-9;
};

struct CensusConfig {
  double delta0 = 0.05;
  std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
};

struct ScenarioConfig {
  std::string scenario = "riemann";
  double gamma = 3.0;
  double A = 1.0 / 3.0;
  EngineConfig engine;
  PatternConfig pattern;
  BlowupConfig blowup;
  RiemannConfig riemann;
  SuiteConfig suite;
  CensusConfig census;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // Sets one dotted key; throws ConfigError naming the key.
  void set(const std::string& key, const std::string& value);
  // Throws ConfigError naming the offending field.
  void validate() const;
  // Every key with its resolved value, one "key=value" per line, sorted.
  std::string manifest() const;
  GasParams gas() const { return GasParams(gamma, A); }
};

// Flat "key=value" text; '#' starts a comment.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

const std::vector<std::string>& scenario_names();

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct ScenarioResult {
  std::vector<CheckResult> checks;
  std::vector<std::string> files;  // written, relative to the output directory

  bool pass() const;
  int exit_code() const { return pass() ? 0 : 1; }
  std::string summary(const std::string& scenario) const;
};

// Writes manifest.txt, the data tables and summary.txt into out_dir.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

// "%.17g"
std::string fmt_double(double x);

}  // namespace psys
