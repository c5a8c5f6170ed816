#pragma once

// Online ridge regression, the forward algorithm and its unregularized
// (pseudo-inverse) variant.
//
//   ridge:    theta_t = G_t(lambda)^{-1} b_t, predicts x_t^T theta_{t-1}
//   forward:  theta_{t-1} = G_t(lambda)^{-1} b_{t-1}, i.e. the incoming feature
//             x_t is folded into the design before predicting
//   unreg.:   theta_{t-1} = G_t(0)^+ b_{t-1}

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fwdreg/design.hpp"

namespace fwdreg {

enum class Algo { ridge, forward, unregularized_forward };

std::string_view algo_name(Algo algo) noexcept;
std::optional<Algo> parse_algo(std::string_view name) noexcept;

struct RegressorSnapshot {
  Algo algo;
  Vector theta;
  std::size_t t;
  double lambda;
};

/// Per-step quantities from the regret decompositions of online ridge and
/// forward regression.
struct StepDiagnostics {
  double prediction = 0.0;
  double loss = 0.0;
  // ridge: (x^T theta_{t-1} - y)^2 * x^T G_t^{-1} x
  // forward: y^2 * x^T G_t^{-1} x
  double first_term = 0.0;
  // forward only: x_{t+1}^T G_t^{-1} x_{t+1} * (x_{t+1}^T theta_t)^2. Known
  // only once x_{t+1} arrives; see OnlineRegressor::previous_second_term().
  double second_term = 0.0;
  // l_t(theta_{t-1}) - l_t(theta_*), zero when theta_* is not supplied
  double instant_oracle_regret = 0.0;
  // ||x_t||^2 in G_t^{-1} and G_{t-1}^{-1} (pseudo-inverses when lambda = 0)
  double potential = 0.0;
  double potential_prev = 0.0;
};

/// x^T G^{-1} b for the current design.
double ridge_predict(const DesignState& design, std::span<const double> x);

/// x^T (G + x x^T)^{-1} b evaluated through an explicit rank-one downdate of
/// G^{-1}; the design is not modified.
double forward_predict(const DesignState& design, std::span<const double> x);

/// Forward parameter (G + x x^T)^{-1} b for a prospective feature x.
Vector forward_theta(const DesignState& design, std::span<const double> x);

/// x^T (G + x x^T)^+ b for an unregularized design.
double unregularized_forward_predict(const DesignState& design, std::span<const double> x);

class OnlineRegressor {
 public:
  OnlineRegressor(Algo algo, std::size_t dim, double lambda);

  /// Issues the prediction for x_t. For the forward variants this also closes
  /// the second term of the previous step.
  double predict(std::span<const double> x);

  /// Reveals y_t. Issues the prediction first if predict() was skipped.
  StepDiagnostics observe(std::span<const double> x, double y, const Vector* theta_star = nullptr);

  /// Second term of step t-1, available after predict(x_t).
  std::optional<double> previous_second_term() const noexcept { return previous_second_term_; }

  /// Estimate after t observations. Without a lookahead feature the forward
  /// objective reduces to ridge (G_t^{-1} b_t, or G_t(0)^+ b_t unregularized);
  /// given x_{t+1} it is G_{t+1}^{-1} b_t.
  Vector theta(std::optional<std::span<const double>> next = std::nullopt) const;
  RegressorSnapshot snapshot() const;

  const DesignState& design() const noexcept { return design_; }
  Algo algo() const noexcept { return algo_; }
  std::size_t t() const noexcept { return design_.count(); }

  // Running maxima of |y_t| and |x_t^T theta_{t-1}|, for the adversarial bounds.
  double max_abs_label() const noexcept { return max_abs_label_; }
  double max_abs_prediction() const noexcept { return max_abs_prediction_; }

 private:
  double potential_before(std::span<const double> x) const;

  Algo algo_;
  DesignState design_;
  std::optional<double> pending_prediction_;
  std::optional<double> previous_second_term_;
  double max_abs_label_ = 0.0;
  double max_abs_prediction_ = 0.0;
};

struct BatchFit {
  Vector theta;
  double loss = 0.0;
  bool rank_deficient = false;
};

/// Unregularized least squares over a whole sample; minimum-norm solution when
/// the features do not span R^d.
BatchFit batch_ols(std::span<const Vector> features, std::span<const double> labels);

}  // namespace fwdreg
