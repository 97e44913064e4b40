#include "bayesmv/cli/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bayesmv::cli {

namespace {

using json = nlohmann::json;
using Setter = std::function<void(const json&, RunConfig&)>;

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sigma", [](const json& v, RunConfig& c) { c.params.sigma = as_double(v, "sigma"); }},
      {"T", [](const json& v, RunConfig& c) { c.params.horizon_T = as_double(v, "T"); }},
      {"tau", [](const json& v, RunConfig& c) { c.params.tau = as_double(v, "tau"); }},
      {"w", [](const json& v, RunConfig& c) { c.params.target_w = as_double(v, "w"); }},
      {"m0", [](const json& v, RunConfig& c) { c.params.prior_mean_m0 = as_double(v, "m0"); }},
      {"P0", [](const json& v, RunConfig& c) { c.params.prior_var_P0 = as_double(v, "P0"); }},
      {"x0", [](const json& v, RunConfig& c) { c.x0 = as_double(v, "x0"); }},
      {"rho", [](const json& v, RunConfig& c) { c.rho = as_double(v, "rho"); }},
      {"prior-sampled",
       [](const json& v, RunConfig& c) { c.prior_sampled = as_bool(v, "prior-sampled"); }},
      {"n-paths", [](const json& v, RunConfig& c) { c.n_paths = as_count(v, "n-paths"); }},
      {"n-steps", [](const json& v, RunConfig& c) { c.n_steps = as_count(v, "n-steps"); }},
      {"seed", [](const json& v, RunConfig& c) { c.seed = as_count(v, "seed"); }},
      {"out", [](const json& v, RunConfig& c) { c.out_dir = as_string(v, "out"); }},
      {"quadrature-n",
       [](const json& v, RunConfig& c) { c.quadrature_n = as_count(v, "quadrature-n"); }},
      {"mode",
       [](const json& v, RunConfig& c) { c.mode = parse_mode_selection(as_string(v, "mode")); }},
      {"t-points",
       [](const json& v, RunConfig& c) { c.heatmap_t_points = as_count(v, "t-points"); }},
      {"m-points",
       [](const json& v, RunConfig& c) { c.heatmap_m_points = as_count(v, "m-points"); }},
      {"m-max", [](const json& v, RunConfig& c) { c.m_max = as_double(v, "m-max"); }},
      {"w-points",
       [](const json& v, RunConfig& c) { c.frontier_points = as_count(v, "w-points"); }},
      {"w-span", [](const json& v, RunConfig& c) { c.frontier_span = as_double(v, "w-span"); }},
      {"hjb-step", [](const json& v, RunConfig& c) { c.hjb_step = as_double(v, "hjb-step"); }},
      {"foc-states",
       [](const json& v, RunConfig& c) { c.foc_states = as_count(v, "foc-states"); }},
      {"inject-alpha-fault",
       [](const json& v, RunConfig& c) { c.alpha_fault = as_double(v, "inject-alpha-fault"); }},
      {"randomized-sweep",
       [](const json& v, RunConfig& c) { c.randomized_sweep = as_bool(v, "randomized-sweep"); }},
      {"sweep-draws",
       [](const json& v, RunConfig& c) { c.sweep_draws = as_count(v, "sweep-draws"); }},
  };
  return table;
}

}  // namespace

ModeSelection parse_mode_selection(const std::string& text) {
  if (text == "innovation") return ModeSelection::innovation;
  if (text == "physical") return ModeSelection::physical;
  if (text == "both") return ModeSelection::both;
  throw ConfigError("mode must be innovation, physical or both (got '" + text + "')");
}

void apply_config_text(const std::string& json_text, RunConfig& config) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a flat JSON object");
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(value, config);
  }
}

void apply_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(text.str(), config);
}

RunConfig default_config() {
  RunConfig config;
  if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
    config.out_dir = dir;
  }
  return config;
}

}  // namespace bayesmv::cli
