#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "psys/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Front-tracking runs for the p-system"};
  std::string config_path, scenario, output;
  long long seed = -1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "flat key=value configuration file");
  app.add_option("--scenario", scenario, "riemann, periodic, perturbed, blowup, small_data_suite or census");
  app.add_option("--output", output, "output directory");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--set", overrides, "key=value override, repeatable");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  psys::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = psys::load_config(config_path);
    for (const std::string& kv : overrides) cfg = psys::parse_config(kv, cfg);
    if (!scenario.empty()) cfg.scenario = scenario;
    if (!output.empty()) cfg.output_dir = output;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.validate();
  } catch (const psys::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    psys::ScenarioResult res = psys::run_scenario(cfg, cfg.output_dir);
    std::cout << res.summary(cfg.scenario);
    return res.exit_code();
  } catch (const psys::Error& e) {
    std::cerr << "scenario " << cfg.scenario << ": " << e.what() << "\n";
    return e.code() == psys::ErrorCode::ConfigError ? 2 : 1;
  }
}
