#include "fwdreg/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fwdreg/kernels.hpp"

namespace fwdreg {
namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Eigen::Map<const Vector> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

void require_dim(const DesignState& design, std::span<const double> x) {
  if (x.size() != design.dim()) {
    throw std::invalid_argument("feature has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(design.dim()));
  }
}

Matrix with_feature(const DesignState& design, std::span<const double> x) {
  const auto v = as_vector(x);
  Matrix g = design.gram();
  g.noalias() += v * v.transpose();
  return g;
}

// x^T G^+ x, or x^T G^{-1} x when the inverse is maintained.
double potential_of(const DesignState& design, std::span<const double> x) {
  if (design.has_inverse()) return design.mahalanobis_sq(x);
  const auto v = as_vector(x);
  return std::max(0.0, v.dot(pseudo_inverse(design.gram()) * v));
}

}  // namespace

std::string_view algo_name(Algo algo) noexcept {
  switch (algo) {
    case Algo::ridge: return "ridge";
    case Algo::forward: return "forward";
    case Algo::unregularized_forward: return "unregularized_forward";
  }
  return "unknown";
}

std::optional<Algo> parse_algo(std::string_view name) noexcept {
  if (name == "ridge") return Algo::ridge;
  if (name == "forward") return Algo::forward;
  if (name == "unregularized_forward") return Algo::unregularized_forward;
  return std::nullopt;
}

double ridge_predict(const DesignState& design, std::span<const double> x) {
  require_dim(design, x);
  const Vector theta = design.solve_theta();
  return kernels::dot(x, view(theta));
}

Vector forward_theta(const DesignState& design, std::span<const double> x) {
  require_dim(design, x);
  // (G + x x^T)^{-1} = G^{-1} - u u^T / (1 + m), u = G^{-1} x, m = x^T u
  const Vector u = design.apply_inverse(x);
  const double m = std::max(0.0, kernels::dot(x, view(u)));
  Vector theta = design.solve_theta();
  const double ub = kernels::dot(view(u), view(design.b()));
  theta -= (ub / (1.0 + m)) * u;
  return theta;
}

double forward_predict(const DesignState& design, std::span<const double> x) {
  const Vector theta = forward_theta(design, x);
  return kernels::dot(x, view(theta));
}

double unregularized_forward_predict(const DesignState& design, std::span<const double> x) {
  require_dim(design, x);
  if (design.has_inverse()) return forward_predict(design, x);
  const Vector theta = pinv_solve(with_feature(design, x), design.b());
  return kernels::dot(x, view(theta));
}

OnlineRegressor::OnlineRegressor(Algo algo, std::size_t dim, double lambda) : algo_(algo), design_(dim, lambda) {
  if (algo == Algo::unregularized_forward) {
    if (lambda != 0.0) throw std::invalid_argument("unregularized_forward requires lambda = 0");
  } else if (!(lambda > 0.0)) {
    throw std::invalid_argument(std::string(algo_name(algo)) + " requires lambda > 0");
  }
}

double OnlineRegressor::predict(std::span<const double> x) {
  require_dim(design_, x);
  double y_hat = 0.0;
  switch (algo_) {
    case Algo::ridge:
      y_hat = ridge_predict(design_, x);
      break;
    case Algo::forward:
      y_hat = forward_predict(design_, x);
      break;
    case Algo::unregularized_forward:
      y_hat = unregularized_forward_predict(design_, x);
      break;
  }
  if (algo_ != Algo::ridge && design_.count() > 0) {
    previous_second_term_ = potential_of(design_, x) * y_hat * y_hat;
  } else {
    previous_second_term_.reset();
  }
  pending_prediction_ = y_hat;
  max_abs_prediction_ = std::max(max_abs_prediction_, std::abs(y_hat));
  return y_hat;
}

double OnlineRegressor::potential_before(std::span<const double> x) const { return potential_of(design_, x); }

StepDiagnostics OnlineRegressor::observe(std::span<const double> x, double y, const Vector* theta_star) {
  require_dim(design_, x);
  if (!pending_prediction_) predict(x);

  StepDiagnostics diag;
  diag.prediction = *pending_prediction_;
  pending_prediction_.reset();
  previous_second_term_.reset();

  const double residual = diag.prediction - y;
  diag.loss = residual * residual;
  diag.potential_prev = potential_before(x);

  design_.update(x, y);
  max_abs_label_ = std::max(max_abs_label_, std::abs(y));

  diag.potential = potential_of(design_, x);
  diag.first_term = (algo_ == Algo::ridge ? diag.loss : y * y) * diag.potential;

  if (theta_star) {
    const double oracle_residual = kernels::dot(x, view(*theta_star)) - y;
    diag.instant_oracle_regret = diag.loss - oracle_residual * oracle_residual;
  }
  return diag;
}

Vector OnlineRegressor::theta(std::optional<std::span<const double>> next) const {
  switch (algo_) {
    case Algo::ridge:
      return design_.solve_theta();
    case Algo::forward:
      return next ? forward_theta(design_, *next) : design_.solve_theta();
    case Algo::unregularized_forward:
      if (next) {
        require_dim(design_, *next);
        return pinv_solve(with_feature(design_, *next), design_.b());
      }
      return design_.pinv_solve();
  }
  return {};
}

RegressorSnapshot OnlineRegressor::snapshot() const {
  return {algo_, theta(), design_.count(), design_.lambda()};
}

BatchFit batch_ols(std::span<const Vector> features, std::span<const double> labels) {
  if (features.empty()) throw std::invalid_argument("batch_ols needs at least one sample");
  if (features.size() != labels.size()) throw std::invalid_argument("batch_ols: features and labels differ in length");
  const auto d = features.front().size();
  if (d == 0) throw std::invalid_argument("batch_ols: zero-dimensional features");
  Matrix design(static_cast<Eigen::Index>(features.size()), d);
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) throw std::invalid_argument("batch_ols: inconsistent feature dimensions");
    design.row(static_cast<Eigen::Index>(i)) = features[i].transpose();
  }
  const auto y = as_vector(labels);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
  BatchFit fit;
  fit.theta = cod.solve(y);
  fit.loss = (design * fit.theta - y).squaredNorm();
  fit.rank_deficient = cod.rank() < d;
  return fit;
}

}  // namespace fwdreg
