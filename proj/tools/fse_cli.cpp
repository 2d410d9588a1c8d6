#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fse/experiments.hpp"

// fse-lab: experiment runner for the one-dimensional fractional Schrödinger
// equation with a concentrated power nonlinearity.

namespace {

int run_kind(const std::string& kind, const std::string& config_path,
             const std::string& out_dir, const std::vector<std::string>& overrides) {
  nlohmann::json j = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "fse-lab: cannot open config " << config_path << '\n';
      return 2;
    }
    try {
      in >> j;
    } catch (const std::exception& e) {
      std::cerr << "fse-lab: config parse error: " << e.what() << '\n';
      return 2;
    }
  }
  if (!kind.empty()) j["experiment"] = kind;
  try {
    for (const auto& ov : overrides) fse::apply_override(j, ov);
    fse::ExperimentConfig cfg = fse::parse_config(j);
    return fse::run_experiment(cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "fse-lab: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fse-lab: charge-equation laboratory for the 1d fractional Schrödinger "
      "equation with a concentrated nonlinearity"};
  app.require_subcommand(1);
  app.fallthrough();  // flags may follow the subcommand

  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON experiment config")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--set", overrides, "override a config key (dotted path, KEY=VALUE)")
      ->take_all();

  const std::vector<std::string> kinds{"evolve", "standing-wave", "blowup-scan",
                                       "green-check", "convergence"};
  for (const auto& k : kinds)
    app.add_subcommand(k, "run the '" + k + "' experiment");

  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();
  return run_kind(kind, config_path, out_dir, overrides);
}
