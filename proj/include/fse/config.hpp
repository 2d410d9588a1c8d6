#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fse/params.hpp"

namespace fse {

inline constexpr const char* kVersion = "0.1.0";

// Experiment configuration.  Single JSON file, documented in the README;
// unknown keys are rejected, command-line --set overrides take dotted paths.
struct ExperimentConfig {
  std::string experiment = "evolve";  // evolve | standing-wave | blowup-scan |
                                      // green-check | convergence

  // model
  double s = 0.75, beta = -1.0, sigma = 0.4, lambda = 1.0;

  // datum (regular part)
  std::string family = "gaussian";  // gaussian | gaussian_packet
  double amplitude_re = 0.2, amplitude_im = 0.0;
  double width = 1.0, center_frequency = 0.0;

  // time grid
  double h = 1.0 / 512.0, T_final = 2.0;

  // spectral grid
  double k_core = 48.0, k_osc = 0.0;  // k_osc 0: derived from the datum
  double grid_tol = 1e-8;

  // solver
  std::string solver = "fixed_point";  // fixed_point | newton
  double tol = 1e-12;
  int max_iter = 200;
  double damping = 0.5;
  double blow_up_threshold = 0.0;  // 0: 1e6·|q0|

  // output
  std::vector<double> snapshot_times;
  double x_max = 8.0;
  int x_count = 129;
  int observable_stride = 8;
  int jump_every = 4;  // jump residual every j-th observable sample; 0: off

  // standing-wave experiment
  std::vector<double> omega_list{0.5, 1.0, 2.0};
  double periods = 1.0;

  // blowup-scan experiment
  std::vector<double> nu_list{1.0, 0.5, 0.25};
  double horizon = 5.0;

  // convergence experiment
  std::vector<double> h_list{1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0, 1.0 / 1024.0};

  // green-check experiment
  std::vector<double> s_list{0.6, 0.75, 0.9, 1.0};
  std::vector<double> lambda_list{1.0, 4.0};

  ModelParams model() const { return ModelParams(s, beta, sigma, lambda); }
};

namespace detail {
inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"", {"experiment", "model", "datum", "time", "grid", "solver", "output",
            "standing", "blowup", "convergence", "green_check"}},
      {"model", {"s", "beta", "sigma", "lambda"}},
      {"datum", {"family", "amplitude_re", "amplitude_im", "width", "center_frequency"}},
      {"time", {"h", "T_final"}},
      {"grid", {"k_core", "k_osc", "tol"}},
      {"solver", {"type", "tol", "max_iter", "damping", "blow_up_threshold"}},
      {"output",
       {"snapshot_times", "x_max", "x_count", "observable_stride", "jump_every"}},
      {"standing", {"omega_list", "periods"}},
      {"blowup", {"nu_list", "horizon"}},
      {"convergence", {"h_list"}},
      {"green_check", {"s_list", "lambda_list"}},
  };
  return schema;
}

inline void validate_keys(const nlohmann::json& j, const std::string& section) {
  const auto& schema = config_schema();
  auto it = schema.find(section);
  if (it == schema.end()) throw std::invalid_argument("config: unknown section " + section);
  for (const auto& [key, value] : j.items()) {
    if (!it->second.count(key))
      throw std::invalid_argument("config: unknown key '" +
                                  (section.empty() ? key : section + "." + key) + "'");
    if (section.empty() && value.is_object()) validate_keys(value, key);
  }
}

template <class T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}
}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  detail::validate_keys(j, "");
  ExperimentConfig c;
  detail::get_if(j, "experiment", c.experiment);
  if (j.contains("model")) {
    const auto& m = j.at("model");
    detail::get_if(m, "s", c.s);
    detail::get_if(m, "beta", c.beta);
    detail::get_if(m, "sigma", c.sigma);
    detail::get_if(m, "lambda", c.lambda);
  }
  if (j.contains("datum")) {
    const auto& d = j.at("datum");
    detail::get_if(d, "family", c.family);
    detail::get_if(d, "amplitude_re", c.amplitude_re);
    detail::get_if(d, "amplitude_im", c.amplitude_im);
    detail::get_if(d, "width", c.width);
    detail::get_if(d, "center_frequency", c.center_frequency);
  }
  if (j.contains("time")) {
    const auto& t = j.at("time");
    detail::get_if(t, "h", c.h);
    detail::get_if(t, "T_final", c.T_final);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::get_if(g, "k_core", c.k_core);
    detail::get_if(g, "k_osc", c.k_osc);
    detail::get_if(g, "tol", c.grid_tol);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    detail::get_if(s, "type", c.solver);
    detail::get_if(s, "tol", c.tol);
    detail::get_if(s, "max_iter", c.max_iter);
    detail::get_if(s, "damping", c.damping);
    detail::get_if(s, "blow_up_threshold", c.blow_up_threshold);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::get_if(o, "snapshot_times", c.snapshot_times);
    detail::get_if(o, "x_max", c.x_max);
    detail::get_if(o, "x_count", c.x_count);
    detail::get_if(o, "observable_stride", c.observable_stride);
    detail::get_if(o, "jump_every", c.jump_every);
  }
  if (j.contains("standing")) {
    const auto& s = j.at("standing");
    detail::get_if(s, "omega_list", c.omega_list);
    detail::get_if(s, "periods", c.periods);
  }
  if (j.contains("blowup")) {
    const auto& b = j.at("blowup");
    detail::get_if(b, "nu_list", c.nu_list);
    detail::get_if(b, "horizon", c.horizon);
  }
  if (j.contains("convergence")) detail::get_if(j.at("convergence"), "h_list", c.h_list);
  if (j.contains("green_check")) {
    const auto& g = j.at("green_check");
    detail::get_if(g, "s_list", c.s_list);
    detail::get_if(g, "lambda_list", c.lambda_list);
  }

  static const std::set<std::string> kinds{"evolve", "standing-wave", "blowup-scan",
                                           "green-check", "convergence"};
  if (!kinds.count(c.experiment))
    throw std::invalid_argument("config: unknown experiment '" + c.experiment + "'");
  static const std::set<std::string> families{"gaussian", "gaussian_packet"};
  if (!families.count(c.family))
    throw std::invalid_argument("config: unknown datum family '" + c.family + "'");
  static const std::set<std::string> solvers{"fixed_point", "newton"};
  if (!solvers.count(c.solver))
    throw std::invalid_argument("config: unknown solver '" + c.solver + "'");
  c.model();  // parameter validation
  return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["model"] = {{"s", c.s}, {"beta", c.beta}, {"sigma", c.sigma}, {"lambda", c.lambda}};
  j["datum"] = {{"family", c.family},
                {"amplitude_re", c.amplitude_re},
                {"amplitude_im", c.amplitude_im},
                {"width", c.width},
                {"center_frequency", c.center_frequency}};
  j["time"] = {{"h", c.h}, {"T_final", c.T_final}};
  j["grid"] = {{"k_core", c.k_core}, {"k_osc", c.k_osc}, {"tol", c.grid_tol}};
  j["solver"] = {{"type", c.solver},
                 {"tol", c.tol},
                 {"max_iter", c.max_iter},
                 {"damping", c.damping},
                 {"blow_up_threshold", c.blow_up_threshold}};
  j["output"] = {{"snapshot_times", c.snapshot_times},
                 {"x_max", c.x_max},
                 {"x_count", c.x_count},
                 {"observable_stride", c.observable_stride},
                 {"jump_every", c.jump_every}};
  j["standing"] = {{"omega_list", c.omega_list}, {"periods", c.periods}};
  j["blowup"] = {{"nu_list", c.nu_list}, {"horizon", c.horizon}};
  j["convergence"] = {{"h_list", c.h_list}};
  j["green_check"] = {{"s_list", c.s_list}, {"lambda_list", c.lambda_list}};
  return j;
}

// Apply a dotted-path override ("model.s=0.9"); the value is parsed as JSON
// with a string fallback.
inline void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--set expects KEY=VALUE, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;  // plain string
  }
  nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw std::invalid_argument("--set: empty key segment in " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace fse
