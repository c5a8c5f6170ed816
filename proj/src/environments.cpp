#include "fwdreg/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fwdreg {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

enum StreamTag : std::uint64_t {
  kFeatureStream = 1,
  kNoiseStream = 2,
  kArmStream = 3,
  kThetaStream = 4,
};

void require_step(std::size_t t, std::size_t T) {
  if (t < 1 || t > T) {
    throw std::out_of_range("step " + std::to_string(t) + " outside 1.." + std::to_string(T));
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_replicate_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master + (index + 1) * kGolden);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t t) noexcept {
  return mix64(mix64(seed ^ mix64(tag * kGolden)) + t * kGolden);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  return r * std::cos(angle);
}

Vector Rng::normal_vector(std::size_t dim) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (auto& c : v) c = normal();
  return v;
}

Vector Rng::uniform_cube(std::size_t dim) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (auto& c : v) c = uniform();
  return v;
}

Vector Rng::uniform_sphere(std::size_t dim, double radius) {
  Vector v;
  double n = 0.0;
  do {
    v = normal_vector(dim);
    n = v.norm();
  } while (n == 0.0);
  return v * (radius / n);
}

Vector Rng::uniform_ball(std::size_t dim, double radius) {
  Vector v = uniform_sphere(dim, 1.0);
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
  return v * r;
}

Vector draw_theta_star(std::uint64_t seed, std::size_t dim) {
  Rng rng(derive_stream_seed(seed, kThetaStream, 0));
  return rng.uniform_ball(dim);
}

std::string_view feature_dist_name(FeatureDist dist) noexcept {
  switch (dist) {
    case FeatureDist::unit_cube: return "unit_cube";
    case FeatureDist::unit_ball: return "unit_ball";
    case FeatureDist::fixed_list: return "fixed_list";
  }
  return "unknown";
}

std::optional<FeatureDist> parse_feature_dist(std::string_view name) noexcept {
  if (name == "unit_cube") return FeatureDist::unit_cube;
  if (name == "unit_ball") return FeatureDist::unit_ball;
  if (name == "fixed_list") return FeatureDist::fixed_list;
  return std::nullopt;
}

void RegressionEnvSpec::validate() const {
  if (d == 0) throw std::invalid_argument("regression env: d must be at least 1");
  if (static_cast<std::size_t>(theta_star.size()) != d) {
    throw std::invalid_argument("regression env: theta_star must have dimension d");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("regression env: sigma must be nonnegative");
  if (T == 0) throw std::invalid_argument("regression env: T must be at least 1");
  if (feature_dist == FeatureDist::fixed_list) {
    if (fixed_features.empty()) throw std::invalid_argument("regression env: fixed_list needs features");
    for (const auto& x : fixed_features) {
      if (static_cast<std::size_t>(x.size()) != d) {
        throw std::invalid_argument("regression env: fixed feature has wrong dimension");
      }
    }
  }
}

double RegressionEnvSpec::feature_bound() const {
  switch (feature_dist) {
    case FeatureDist::unit_cube: return std::sqrt(static_cast<double>(d));
    case FeatureDist::unit_ball: return 1.0;
    case FeatureDist::fixed_list: {
      double m = 0.0;
      for (const auto& x : fixed_features) m = std::max(m, x.norm());
      return m;
    }
  }
  return 0.0;
}

RegressionSample gen_regression_step(const RegressionEnvSpec& spec, std::size_t t) {
  require_step(t, spec.T);
  RegressionSample s;
  switch (spec.feature_dist) {
    case FeatureDist::unit_cube: {
      Rng rng(derive_stream_seed(spec.seed, kFeatureStream, t));
      s.x = rng.uniform_cube(spec.d);
      break;
    }
    case FeatureDist::unit_ball: {
      Rng rng(derive_stream_seed(spec.seed, kFeatureStream, t));
      s.x = rng.uniform_ball(spec.d);
      break;
    }
    case FeatureDist::fixed_list:
      s.x = spec.fixed_features[(t - 1) % spec.fixed_features.size()];
      break;
  }
  Rng noise(derive_stream_seed(spec.seed, kNoiseStream, t));
  s.y = s.x.dot(spec.theta_star) + spec.sigma * noise.normal();
  return s;
}

std::string_view theta_path_name(ThetaPath path) noexcept {
  switch (path) {
    case ThetaPath::constant: return "constant";
    case ThetaPath::abrupt: return "abrupt";
    case ThetaPath::slow: return "slow";
  }
  return "unknown";
}

std::optional<ThetaPath> parse_theta_path(std::string_view name) noexcept {
  if (name == "constant") return ThetaPath::constant;
  if (name == "abrupt") return ThetaPath::abrupt;
  if (name == "slow") return ThetaPath::slow;
  return std::nullopt;
}

std::string_view arm_mode_name(ArmMode mode) noexcept {
  switch (mode) {
    case ArmMode::fixed_ball: return "fixed_ball";
    case ArmMode::resampled_circle: return "resampled_circle";
    case ArmMode::resampled_ball: return "resampled_ball";
  }
  return "unknown";
}

std::optional<ArmMode> parse_arm_mode(std::string_view name) noexcept {
  if (name == "fixed_ball") return ArmMode::fixed_ball;
  if (name == "resampled_circle") return ArmMode::resampled_circle;
  if (name == "resampled_ball") return ArmMode::resampled_ball;
  return std::nullopt;
}

Vector drifting_theta(ThetaPath path, std::size_t t) {
  Vector theta(2);
  switch (path) {
    case ThetaPath::abrupt:
      if (t < 1000) {
        theta << 1.0, 0.0;
      } else if (t <= 2000) {
        theta << -1.0, 0.0;
      } else if (t < 3000) {
        theta << 0.0, 1.0;
      } else {
        theta << 0.0, -1.0;
      }
      return theta;
    case ThetaPath::slow: {
      const double frac = static_cast<double>(std::min(t, kSlowRotationSteps)) / kSlowRotationSteps;
      const double angle = 0.5 * std::numbers::pi * frac;
      theta << std::cos(angle), std::sin(angle);
      return theta;
    }
    case ThetaPath::constant:
      break;
  }
  throw std::invalid_argument("drifting_theta: the constant path has no schedule");
}

void BanditEnvSpec::validate() const {
  if (d == 0) throw std::invalid_argument("bandit env: d must be at least 1");
  if (K == 0) throw std::invalid_argument("bandit env: K must be at least 1");
  if (T == 0) throw std::invalid_argument("bandit env: T must be at least 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("bandit env: sigma must be nonnegative");
  if (!(max_norm > 0.0)) throw std::invalid_argument("bandit env: max_norm must be positive");
  if (theta_path != ThetaPath::constant && d != 2) {
    throw std::invalid_argument("bandit env: drifting schedules are two-dimensional");
  }
  if (arms == ArmMode::resampled_circle && d != 2) {
    throw std::invalid_argument("bandit env: circle arms need d = 2");
  }
  if (theta_path == ThetaPath::constant && theta_star.size() != 0 &&
      static_cast<std::size_t>(theta_star.size()) != d) {
    throw std::invalid_argument("bandit env: theta_star must have dimension d");
  }
}

BanditEnvironment::BanditEnvironment(BanditEnvSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.arms == ArmMode::fixed_ball) {
    Rng rng(derive_stream_seed(spec_.seed, kArmStream, 0));
    fixed_arms_.reserve(spec_.K);
    for (std::size_t k = 0; k < spec_.K; ++k) fixed_arms_.push_back(rng.uniform_ball(spec_.d, spec_.max_norm));
  }
  if (spec_.theta_path == ThetaPath::constant) {
    if (spec_.theta_star.size() != 0) {
      constant_theta_ = spec_.theta_star;
    } else {
      constant_theta_ = draw_theta_star(spec_.seed, spec_.d);
    }
  }
}

Vector BanditEnvironment::theta_at(std::size_t t) const {
  if (spec_.theta_path == ThetaPath::constant) return constant_theta_;
  return drifting_theta(spec_.theta_path, t);
}

BanditRound BanditEnvironment::round(std::size_t t) const {
  require_step(t, spec_.T);
  BanditRound r;
  r.theta_star = theta_at(t);
  switch (spec_.arms) {
    case ArmMode::fixed_ball:
      r.actions = fixed_arms_;
      break;
    case ArmMode::resampled_circle:
    case ArmMode::resampled_ball: {
      Rng rng(derive_stream_seed(spec_.seed, kArmStream, t));
      r.actions.reserve(spec_.K);
      for (std::size_t k = 0; k < spec_.K; ++k) {
        r.actions.push_back(spec_.arms == ArmMode::resampled_circle ? rng.uniform_sphere(2, spec_.max_norm)
                                                                     : rng.uniform_ball(spec_.d, spec_.max_norm));
      }
      break;
    }
  }
  return r;
}

double BanditEnvironment::reward(std::size_t t, const Vector& x) const {
  require_step(t, spec_.T);
  Rng noise(derive_stream_seed(spec_.seed, kNoiseStream, t));
  return x.dot(theta_at(t)) + spec_.sigma * noise.normal();
}

double BanditEnvironment::total_variation() const {
  if (spec_.theta_path == ThetaPath::constant) return 0.0;
  double total = 0.0;
  Vector prev = theta_at(1);
  for (std::size_t s = 2; s <= spec_.T; ++s) {
    Vector cur = theta_at(s);
    total += (cur - prev).norm();
    prev = std::move(cur);
  }
  return total;
}

BanditRound gen_bandit_round(const BanditEnvSpec& spec, std::size_t t) { return BanditEnvironment(spec).round(t); }

}  // namespace fwdreg
