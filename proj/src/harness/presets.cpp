#include <stdexcept>

#include "fwdreg/harness.hpp"

namespace fwdreg {
namespace {

struct Preset {
  std::string_view name;
  std::string_view json;
};

constexpr Preset kPresets[] = {
    {"fig1", R"j({
      "kind": "regression", "name": "fig1", "master_seed": 1, "replicates": 100, "delta": 0.05,
      "outputs": {"svg": "fig1.svg"},
      "env": {"d": 5, "T": 200, "sigma": 0.1, "features": "unit_cube", "S": 1, "theta_star": "unit_ball"},
      "algos": [{"name": "ridge", "lambda": 1}, {"name": "forward", "lambda": 1}]
    })j"},
    {"fig2", R"j({
      "kind": "regression", "name": "fig2", "master_seed": 2, "replicates": 100, "delta": 0.05,
      "outputs": {"svg": "fig2.svg"},
      "env": {"d": 5, "T": 1000, "sigma": 0.1, "features": "unit_ball", "S": 1, "theta_star": "unit_ball"},
      "algos": [
        {"name": "ridge", "lambda": "1/T"}, {"name": "ridge", "lambda": "1/log(T)"},
        {"name": "ridge", "lambda": 1}, {"name": "ridge", "lambda": 10},
        {"name": "forward", "lambda": "1/T"}, {"name": "forward", "lambda": "1/log(T)"},
        {"name": "forward", "lambda": 1}, {"name": "forward", "lambda": 10}
      ]
    })j"},
    {"fig3", R"j({
      "kind": "bandit", "name": "fig3", "master_seed": 3, "replicates": 100, "delta": 0.001,
      "outputs": {"svg": "fig3.svg"},
      "env": {"d": 100, "K": 10, "T": 1000, "sigma": 0.31622776601683794, "max_norm": 200,
              "arms": "fixed_ball", "theta_path": "constant", "S": 1, "theta_star": "unit_ball"},
      "algos": [{"name": "oful", "lambda": 1e-5}, {"name": "oful_forward", "lambda": 1e-5}]
    })j"},
    {"abrupt", R"j({
      "kind": "nonstationary", "name": "abrupt", "master_seed": 4, "replicates": 100, "delta": 0.01,
      "outputs": {"svg": "abrupt.svg"},
      "env": {"d": 2, "K": 10, "T": 4000, "sigma": 0.1, "max_norm": 1,
              "arms": "resampled_circle", "theta_path": "abrupt", "S": 1, "theta_star": "unit_ball"},
      "algos": [{"name": "dlinucb", "lambda": 1, "gamma": "auto", "D": "auto"},
                {"name": "dlinucb_forward", "lambda": 1, "gamma": "auto", "D": "auto"}]
    })j"},
    {"slow", R"j({
      "kind": "nonstationary", "name": "slow", "master_seed": 5, "replicates": 100, "delta": 0.01,
      "outputs": {"svg": "slow.svg"},
      "env": {"d": 2, "K": 10, "T": 4000, "sigma": 0.1, "max_norm": 1,
              "arms": "resampled_circle", "theta_path": "slow", "S": 1, "theta_star": "unit_ball"},
      "algos": [{"name": "dlinucb", "lambda": 1, "gamma": "auto", "D": "auto"},
                {"name": "dlinucb_forward", "lambda": 1, "gamma": "auto", "D": "auto"}]
    })j"},
    {"bounds", R"j({
      "kind": "bounds_table", "name": "bounds",
      "bounds": {"sigma": 0.1, "S": 1, "X": 1, "lambda": 1, "delta": 0.05, "d": 5,
                 "T_grid": [0, 10, 100, 1000, 10000, 100000],
                 "gamma": 0.99, "D": 100, "variation": 1.5708, "Y": 1}
    })j"},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

ExperimentConfig preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return config_from_json(nlohmann::json::parse(p.json));
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace fwdreg
