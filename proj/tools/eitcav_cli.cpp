// Command-line front end: eitcav --config run.json [--out DIR] [--threads N] [--scenario NAME]

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "eitcav/config.hpp"
#include "eitcav/errors.hpp"
#include "eitcav/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cavity EIT and optical switching simulator"};
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  std::string scenario;
  app.add_option("--config,-c", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out,-o", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads,-j", threads, "worker threads (0: all hardware threads)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--scenario,-s", scenario, "override the configuration's scenario")
      ->check(CLI::IsMember({"spectrum", "reflection", "dynamics", "switch_sweep", "validate"}));
  app.set_version_flag("--version", eitcav::version());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : eitcav::kExitConfig;
  }

  const std::optional<std::string> override_scenario =
      scenario.empty() ? std::nullopt : std::optional<std::string>(scenario);
  try {
    eitcav::RunConfig cfg;
    if (config_path.empty()) {
      if (scenario != "validate") {
        std::cerr << "error: --config is required (except with --scenario validate)\n";
        return eitcav::kExitConfig;
      }
      cfg.scenario = eitcav::Scenario::kValidate;
    } else {
      cfg = eitcav::load_config(config_path, override_scenario);
    }
    return eitcav::run(cfg, {out_dir, threads}, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return eitcav::exit_code_for(e);
  }
}
