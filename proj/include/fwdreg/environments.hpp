#pragma once

// Seeded data generators. Every draw is a pure function of (seed, stream tag,
// step), so streams can be replayed or advanced out of order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "fwdreg/design.hpp"

namespace fwdreg {

/// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed of replicate `index` under `master`. Injective in `index` for fixed master.
std::uint64_t derive_replicate_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seed of sub-stream `tag` at step `t` under `seed`.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t t) noexcept;

/// mt19937_64 with platform-independent uniform and normal transforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by the Box-Muller transform.
  double normal();
  Vector normal_vector(std::size_t dim);
  Vector uniform_cube(std::size_t dim);
  /// Uniform in the Euclidean ball of the given radius.
  Vector uniform_ball(std::size_t dim, double radius = 1.0);
  /// Uniform on the sphere of the given radius.
  Vector uniform_sphere(std::size_t dim, double radius = 1.0);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// theta_* drawn uniformly in the unit ball from the replicate's theta stream.
Vector draw_theta_star(std::uint64_t seed, std::size_t dim);

enum class FeatureDist { unit_cube, unit_ball, fixed_list };

std::string_view feature_dist_name(FeatureDist dist) noexcept;
std::optional<FeatureDist> parse_feature_dist(std::string_view name) noexcept;

struct RegressionEnvSpec {
  std::size_t d = 1;
  Vector theta_star;
  double sigma = 0.0;
  FeatureDist feature_dist = FeatureDist::unit_cube;
  std::size_t T = 1;
  std::uint64_t seed = 0;
  /// Features of the fixed_list distribution, cycled through in order.
  std::vector<Vector> fixed_features;

  void validate() const;
  /// The norm cap guaranteed by the feature distribution.
  double feature_bound() const;
};

struct RegressionSample {
  Vector x;
  double y = 0.0;
};

/// Step t in 1..T. Deterministic in (seed, t).
RegressionSample gen_regression_step(const RegressionEnvSpec& spec, std::size_t t);

enum class ThetaPath { constant, abrupt, slow };
enum class ArmMode { fixed_ball, resampled_circle, resampled_ball };

std::string_view theta_path_name(ThetaPath path) noexcept;
std::optional<ThetaPath> parse_theta_path(std::string_view name) noexcept;
std::string_view arm_mode_name(ArmMode mode) noexcept;
std::optional<ArmMode> parse_arm_mode(std::string_view name) noexcept;

/// theta_*(t) of the two-dimensional drifting schedules.
///   abrupt: (1,0) for t < 1000, (-1,0) for 1000 <= t <= 2000,
///           (0,1) for 2000 < t < 3000, (0,-1) from t = 3000 on.
///   slow:   angle (pi/2) min(t, 3000)/3000 on the unit circle.
Vector drifting_theta(ThetaPath path, std::size_t t);

/// Number of rounds of the slow rotation and the abrupt change points.
inline constexpr std::size_t kSlowRotationSteps = 3000;

struct BanditEnvSpec {
  std::size_t d = 2;
  std::size_t K = 10;
  ArmMode arms = ArmMode::fixed_ball;
  ThetaPath theta_path = ThetaPath::constant;
  /// Used by the constant path; drawn uniformly in the unit ball when empty.
  Vector theta_star;
  double sigma = 0.0;
  std::size_t T = 1;
  std::uint64_t seed = 0;
  double max_norm = 1.0;

  void validate() const;
};

struct BanditRound {
  std::vector<Vector> actions;
  Vector theta_star;
};

/// A bandit world with its per-replicate draws (fixed arms, constant theta_*)
/// materialized once.
class BanditEnvironment {
 public:
  explicit BanditEnvironment(BanditEnvSpec spec);

  const BanditEnvSpec& spec() const noexcept { return spec_; }
  Vector theta_at(std::size_t t) const;
  /// Round t in 1..T.
  BanditRound round(std::size_t t) const;
  /// <x, theta_*(t)> plus the round's noise draw.
  double reward(std::size_t t, const Vector& x) const;
  /// B_T = sum_{s=1}^{T-1} ||theta_*(s+1) - theta_*(s)||.
  double total_variation() const;

 private:
  BanditEnvSpec spec_;
  std::vector<Vector> fixed_arms_;
  Vector constant_theta_;
};

BanditRound gen_bandit_round(const BanditEnvSpec& spec, std::size_t t);

}  // namespace fwdreg
