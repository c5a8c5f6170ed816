#include <cmath>
#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "fwdreg/harness.hpp"

namespace fwdreg {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("config: " + what); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("field '") + key + "' has the wrong type");
  }
}

Setting parse_setting(const json& j, const char* key, Setting fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return Setting::literal(v.get<double>());
  if (v.is_string()) return Setting::expression(v.get<std::string>());
  bad(std::string("field '") + key + "' must be a number or a string");
}

json setting_json(const Setting& s) { return s.is_literal() ? json(s.value) : json(s.expr); }

Vector parse_vector(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad(std::string(what) + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

double resolve_lambda(const Setting& s, double T) {
  if (s.is_literal()) return s.value;
  if (s.expr == "1/T") return 1.0 / T;
  if (s.expr == "1/log(T)") return 1.0 / std::log(T);
  bad("unknown lambda expression '" + s.expr + "' (expected a number, \"1/T\" or \"1/log(T)\")");
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::regression: return "regression";
    case ExperimentKind::bandit: return "bandit";
    case ExperimentKind::nonstationary: return "nonstationary";
    case ExperimentKind::bounds_table: return "bounds_table";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept {
  if (name == "regression") return ExperimentKind::regression;
  if (name == "bandit") return ExperimentKind::bandit;
  if (name == "nonstationary") return ExperimentKind::nonstationary;
  if (name == "bounds_table") return ExperimentKind::bounds_table;
  return std::nullopt;
}

std::size_t ExperimentConfig::horizon() const noexcept {
  switch (kind) {
    case ExperimentKind::regression: return regression.T;
    case ExperimentKind::bandit:
    case ExperimentKind::nonstationary: return bandit.T;
    case ExperimentKind::bounds_table: {
      double m = 0.0;
      for (double t : bounds.T_grid) m = std::max(m, t);
      return static_cast<std::size_t>(m);
    }
  }
  return 0;
}

void ExperimentConfig::validate() const {
  if (kind == ExperimentKind::bounds_table) {
    bounds.params.validate();
    if (bounds.T_grid.empty()) bad("bounds.T_grid must not be empty");
    for (double t : bounds.T_grid) {
      if (!(t >= 0.0)) bad("bounds.T_grid entries must be nonnegative");
    }
    if (!(bounds.gamma > 0.0 && bounds.gamma < 1.0)) bad("bounds.gamma must lie in (0,1)");
    if (!(bounds.D >= 1.0)) bad("bounds.D must be at least 1");
    return;
  }
  if (replicates < 1) bad("replicates must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) bad("delta must lie in (0,1)");
  if (!(S >= 0.0)) bad("S must be nonnegative");
  if (algos.empty()) bad("algos must not be empty");
  if (kind == ExperimentKind::regression) {
    auto env = regression;
    if (draw_theta_star) env.theta_star = Vector::Zero(static_cast<Eigen::Index>(env.d));
    env.validate();
  } else {
    auto env = bandit;
    if (draw_theta_star) env.theta_star.resize(0);
    env.validate();
    if (kind == ExperimentKind::bandit && bandit.theta_path != ThetaPath::constant) {
      bad("kind 'bandit' needs theta_path 'constant'; use 'nonstationary' for drifting schedules");
    }
  }
  (void)resolve_algos();
}

std::vector<ResolvedAlgo> ExperimentConfig::resolve_algos() const {
  const double T = static_cast<double>(horizon());
  std::vector<ResolvedAlgo> out;
  for (const auto& a : algos) {
    ResolvedAlgo r;
    r.name = a.name;
    r.lambda = resolve_lambda(a.lambda, T);
    if (kind == ExperimentKind::regression) {
      const auto algo = parse_algo(a.name);
      if (!algo) bad("'" + a.name + "' is not a regression algorithm");
      r.is_regressor = true;
      r.regressor = *algo;
      if (*algo == Algo::unregularized_forward) {
        if (r.lambda != 0.0) bad("unregularized_forward requires lambda = 0");
      } else if (!(r.lambda > 0.0)) {
        bad(a.name + " requires lambda > 0");
      }
    } else {
      const auto algo = parse_bandit_algo(a.name);
      if (!algo) bad("'" + a.name + "' is not a bandit algorithm");
      r.is_regressor = false;
      r.bandit = *algo;
      if (!(r.lambda > 0.0)) bad(a.name + " requires lambda > 0");
      const bool discounted = *algo == BanditAlgo::dlinucb || *algo == BanditAlgo::dlinucb_forward;
      if (discounted) {
        if (a.gamma.is_literal()) {
          r.gamma = a.gamma.value;
        } else if (a.gamma.expr == "auto") {
          // 1 - (B_T / (d T))^{2/3}
          auto env = bandit;
          env.theta_star.resize(0);
          const double B = BanditEnvironment(env).total_variation();
          r.gamma = 1.0 - std::pow(B / (static_cast<double>(bandit.d) * T), 2.0 / 3.0);
        } else {
          bad("unknown gamma expression '" + a.gamma.expr + "'");
        }
        if (!(r.gamma > 0.0 && r.gamma <= 1.0)) bad(a.name + ": gamma must lie in (0,1]");
      }
      if (a.D.is_literal()) {
        r.D = a.D.value;
      } else if (a.D.expr == "auto") {
        r.D = r.gamma < 1.0 ? std::ceil(std::log(T) / (1.0 - r.gamma)) : 1.0;
      } else {
        bad("unknown D expression '" + a.D.expr + "'");
      }
      if (!(r.D >= 1.0)) bad(a.name + ": D must be at least 1");
    }
    out.push_back(std::move(r));
  }
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  ExperimentConfig c;
  const auto kind = parse_kind(get_or<std::string>(j, "kind", ""));
  if (!kind) bad("kind must be one of regression, bandit, nonstationary, bounds_table");
  c.kind = *kind;
  c.name = get_or<std::string>(j, "name", "");
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", 1);
  c.replicates = get_or<std::size_t>(j, "replicates", 1);
  c.delta = get_or<double>(j, "delta", 0.05);
  c.threads = get_or<std::size_t>(j, "threads", 0);
  c.record_diagnostics = get_or<bool>(j, "record_diagnostics", true);

  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    c.outputs.traces = get_or<std::string>(o, "traces", c.outputs.traces);
    c.outputs.summary = get_or<std::string>(o, "summary", c.outputs.summary);
    c.outputs.checkpoints = get_or<std::string>(o, "checkpoints", c.outputs.checkpoints);
    c.outputs.bounds = get_or<std::string>(o, "bounds", c.outputs.bounds);
    c.outputs.svg = get_or<std::string>(o, "svg", c.outputs.svg);
  }

  if (c.kind == ExperimentKind::bounds_table) {
    if (!j.contains("bounds")) bad("bounds_table needs a 'bounds' object");
    const auto& b = j.at("bounds");
    auto& p = c.bounds.params;
    p.sigma = get_or<double>(b, "sigma", p.sigma);
    p.S = get_or<double>(b, "S", p.S);
    p.X = get_or<double>(b, "X", p.X);
    p.lambda = get_or<double>(b, "lambda", p.lambda);
    p.delta = get_or<double>(b, "delta", c.delta);
    p.d = get_or<std::size_t>(b, "d", p.d);
    c.bounds.T_grid = get_or<std::vector<double>>(b, "T_grid", {});
    c.bounds.gamma = get_or<double>(b, "gamma", c.bounds.gamma);
    c.bounds.D = get_or<double>(b, "D", c.bounds.D);
    c.bounds.variation = get_or<double>(b, "variation", c.bounds.variation);
    c.bounds.Y = get_or<double>(b, "Y", c.bounds.Y);
    c.validate();
    return c;
  }

  if (!j.contains("env")) bad("missing 'env' object");
  const auto& e = j.at("env");
  c.S = get_or<double>(e, "S", 1.0);
  const json theta = e.contains("theta_star") ? e.at("theta_star") : json("unit_ball");
  if (theta.is_string()) {
    if (theta.get<std::string>() != "unit_ball") bad("env.theta_star must be \"unit_ball\" or an array");
    c.draw_theta_star = true;
  } else {
    c.draw_theta_star = false;
  }

  if (c.kind == ExperimentKind::regression) {
    auto& r = c.regression;
    r.d = get_or<std::size_t>(e, "d", 1);
    r.T = get_or<std::size_t>(e, "T", 1);
    r.sigma = get_or<double>(e, "sigma", 0.0);
    const auto dist = parse_feature_dist(get_or<std::string>(e, "features", "unit_cube"));
    if (!dist) bad("env.features must be unit_cube, unit_ball or fixed_list");
    r.feature_dist = *dist;
    if (e.contains("fixed_features")) {
      for (const auto& row : e.at("fixed_features")) r.fixed_features.push_back(parse_vector(row, "fixed_features"));
    }
    if (!c.draw_theta_star) r.theta_star = parse_vector(theta, "env.theta_star");
  } else {
    auto& b = c.bandit;
    b.d = get_or<std::size_t>(e, "d", 2);
    b.K = get_or<std::size_t>(e, "K", 10);
    b.T = get_or<std::size_t>(e, "T", 1);
    b.sigma = get_or<double>(e, "sigma", 0.0);
    b.max_norm = get_or<double>(e, "max_norm", 1.0);
    const auto arms = parse_arm_mode(get_or<std::string>(e, "arms", "fixed_ball"));
    if (!arms) bad("env.arms must be fixed_ball, resampled_circle or resampled_ball");
    b.arms = *arms;
    const auto path = parse_theta_path(get_or<std::string>(e, "theta_path", "constant"));
    if (!path) bad("env.theta_path must be constant, abrupt or slow");
    b.theta_path = *path;
    if (!c.draw_theta_star) b.theta_star = parse_vector(theta, "env.theta_star");
  }

  if (!j.contains("algos") || !j.at("algos").is_array()) bad("missing 'algos' array");
  for (const auto& a : j.at("algos")) {
    AlgoConfig ac;
    ac.name = get_or<std::string>(a, "name", "");
    ac.lambda = parse_setting(a, "lambda", ac.lambda);
    ac.gamma = parse_setting(a, "gamma", ac.gamma);
    ac.D = parse_setting(a, "D", ac.D);
    c.algos.push_back(std::move(ac));
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = std::string(kind_name(c.kind));
  if (!c.name.empty()) j["name"] = c.name;
  j["master_seed"] = c.master_seed;
  j["outputs"] = {{"traces", c.outputs.traces},
                  {"summary", c.outputs.summary},
                  {"checkpoints", c.outputs.checkpoints},
                  {"bounds", c.outputs.bounds},
                  {"svg", c.outputs.svg}};
  if (c.kind == ExperimentKind::bounds_table) {
    const auto& p = c.bounds.params;
    j["bounds"] = {{"sigma", p.sigma}, {"S", p.S},         {"X", p.X},
                   {"lambda", p.lambda}, {"delta", p.delta}, {"d", p.d},
                   {"T_grid", c.bounds.T_grid}, {"gamma", c.bounds.gamma}, {"D", c.bounds.D},
                   {"variation", c.bounds.variation}, {"Y", c.bounds.Y}};
    return j;
  }
  j["replicates"] = c.replicates;
  j["delta"] = c.delta;
  j["threads"] = c.threads;
  j["record_diagnostics"] = c.record_diagnostics;
  json e;
  e["S"] = c.S;
  if (c.kind == ExperimentKind::regression) {
    const auto& r = c.regression;
    e["d"] = r.d;
    e["T"] = r.T;
    e["sigma"] = r.sigma;
    e["features"] = std::string(feature_dist_name(r.feature_dist));
    if (!r.fixed_features.empty()) {
      json rows = json::array();
      for (const auto& x : r.fixed_features) rows.push_back(vector_json(x));
      e["fixed_features"] = rows;
    }
    e["theta_star"] = c.draw_theta_star ? json("unit_ball") : vector_json(r.theta_star);
  } else {
    const auto& b = c.bandit;
    e["d"] = b.d;
    e["K"] = b.K;
    e["T"] = b.T;
    e["sigma"] = b.sigma;
    e["max_norm"] = b.max_norm;
    e["arms"] = std::string(arm_mode_name(b.arms));
    e["theta_path"] = std::string(theta_path_name(b.theta_path));
    e["theta_star"] = c.draw_theta_star ? json("unit_ball") : vector_json(b.theta_star);
  }
  j["env"] = e;
  json algos = json::array();
  for (const auto& a : c.algos) {
    json aj{{"name", a.name}, {"lambda", setting_json(a.lambda)}};
    if (a.name == "dlinucb" || a.name == "dlinucb_forward") {
      aj["gamma"] = setting_json(a.gamma);
      aj["D"] = setting_json(a.D);
    }
    algos.push_back(aj);
  }
  j["algos"] = algos;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace fwdreg
