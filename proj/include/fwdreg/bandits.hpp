#pragma once

// Optimistic linear-bandit agents over finite action sets: OFUL (ridge
// index), OFUL^f (forward index), D-LinUCB and D-LinUCB^f (discounted least
// squares with forgetting factor gamma).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fwdreg/bounds.hpp"
#include "fwdreg/design.hpp"

namespace fwdreg {

enum class BanditAlgo { oful, oful_forward, dlinucb, dlinucb_forward };

std::string_view bandit_algo_name(BanditAlgo algo) noexcept;
std::optional<BanditAlgo> parse_bandit_algo(std::string_view name) noexcept;

struct Selection {
  std::size_t index = 0;
  double value = 0.0;
};

/// Argmax of `index_fn` over the actions; ties go to the lowest position.
Selection select_action(std::span<const Vector> actions, const std::function<double(const Vector&)>& index_fn);

/// max_a <a, theta_*> - <actions[chosen], theta_*>.
double pseudo_regret_step(const Vector& theta_star, std::span<const Vector> actions, std::size_t chosen);

class BanditAgent {
 public:
  virtual ~BanditAgent() = default;

  /// Upper-confidence index of every action for the current round.
  virtual std::vector<double> indices(std::span<const Vector> actions) = 0;
  virtual void update(std::span<const double> x, double reward) = 0;
  virtual BanditAlgo algo() const noexcept = 0;
  virtual std::size_t rounds() const noexcept = 0;

  /// Argmax of indices() with lowest-position tie-breaking.
  Selection choose(std::span<const Vector> actions);
};

/// OFUL: <x, theta_t> + beta_ridge(t) ||x||_{G_t^{-1}}.
class Oful final : public BanditAgent {
 public:
  Oful(std::size_t dim, const BoundParams& params);

  double index(std::span<const double> x) const;
  std::vector<double> indices(std::span<const Vector> actions) override;
  void update(std::span<const double> x, double reward) override;
  BanditAlgo algo() const noexcept override { return BanditAlgo::oful; }
  std::size_t rounds() const noexcept override { return design_.count(); }

  const DesignState& design() const noexcept { return design_; }
  const Vector& theta() const noexcept { return theta_; }

 private:
  BoundParams params_;
  DesignState design_;
  Vector theta_;
};

/// OFUL^f. For round t = rounds() + 1 and candidate x, with
/// G_x = G_{t-1} + x x^T and X_t(x) = max(||x||, max_{s<t} ||x_s||):
///   <x, G_x^{-1} b> + ||x||_{G_x^{-1}} ((sqrt(lambda) + ||x||) S
///       + sigma sqrt(2 log((1 + t X_t(x)^2/(lambda d))^{d/2} / delta)))
class OfulForward final : public BanditAgent {
 public:
  OfulForward(std::size_t dim, const BoundParams& params);

  double index(std::span<const double> x) const;
  /// The exploitation part <x, theta_t^f(x)>.
  double forward_estimate(std::span<const double> x) const;
  /// The radius multiplying ||x||_{G_x^{-1}}.
  double radius(std::span<const double> x) const;

  std::vector<double> indices(std::span<const Vector> actions) override;
  void update(std::span<const double> x, double reward) override;
  BanditAlgo algo() const noexcept override { return BanditAlgo::oful_forward; }
  std::size_t rounds() const noexcept override { return design_.count(); }

  const DesignState& design() const noexcept { return design_; }
  double running_X() const noexcept { return running_X_; }

 private:
  BoundParams params_;
  DesignState design_;
  Vector theta_;  // ridge parameter G^{-1} b, reused by every candidate
  double running_X_ = 0.0;
};

/// Weighted least squares with forgetting factor gamma:
///   V = gamma V + x x^T + (1 - gamma) lambda I
///   V~ = gamma^2 V~ + x x^T + (1 - gamma^2) lambda I
///   b = gamma b + y x
struct DiscountedState {
  Matrix V;
  Matrix V_tilde;
  Vector b;
  double gamma = 1.0;
  double lambda = 1.0;
  std::size_t t = 0;

  DiscountedState(std::size_t dim, double lambda, double gamma);
  void update(std::span<const double> x, double reward);
};

class DLinUcb final : public BanditAgent {
 public:
  DLinUcb(Variant variant, std::size_t dim, const BoundParams& params, double gamma);
  /// Resumes from an existing discounted state; lambda is taken from it.
  DLinUcb(Variant variant, DiscountedState state, const BoundParams& params);

  std::vector<double> indices(std::span<const Vector> actions) override;
  void update(std::span<const double> x, double reward) override;
  BanditAlgo algo() const noexcept override {
    return variant_ == Variant::ridge ? BanditAlgo::dlinucb : BanditAlgo::dlinucb_forward;
  }
  std::size_t rounds() const noexcept override { return state_.t; }

  const DiscountedState& state() const noexcept { return state_; }
  /// beta_{t-1} of the current round for an action of norm `action_norm`.
  double beta(double action_norm = 0.0) const;

 private:
  Variant variant_;
  BoundParams params_;
  DiscountedState state_;
};

/// One D-LinUCB round on an explicit state: selects the argmax UCB action,
/// queries its reward and applies the discounted update.
Selection dlinucb_step(DiscountedState& state, std::span<const Vector> actions, Variant variant,
                       const BoundParams& params, const std::function<double(const Vector&)>& reward);

struct BanditAgentSpec {
  BanditAlgo algo = BanditAlgo::oful;
  double gamma = 1.0;  // discounted algorithms only
};

std::unique_ptr<BanditAgent> make_agent(const BanditAgentSpec& spec, std::size_t dim, const BoundParams& params);

}  // namespace fwdreg
