#pragma once

// Closed-form confidence widths and regret bounds for online ridge / forward
// regression and the OFUL / D-LinUCB bandit families. All evaluators are pure.

#include <cstddef>
#include <optional>

#include "fwdreg/regressors.hpp"

namespace fwdreg {

struct BoundParams {
  double sigma = 0.0;   // sub-Gaussian scale of the noise
  double S = 1.0;       // bound on ||theta_*||_2
  double X = 1.0;       // bound on ||x_t||_2
  double lambda = 1.0;  // regularization
  double delta = 0.05;  // confidence level
  std::size_t d = 1;

  /// Throws std::invalid_argument unless delta is in (0,1), lambda > 0 and
  /// the scale parameters are nonnegative.
  void validate() const;
};

enum class Variant { ridge, forward };

/// x / log(1 + x), continuously extended by 1 at x = 0. Nondecreasing, >= 1.
double scale_factor(double x);

/// Ridge front factor X^2 / (lambda log(1 + X^2/lambda)).
double ridge_front_factor(double X, double lambda);

/// Radius of the ridge confidence ellipsoid after t observations:
/// sigma sqrt(d log((1 + t X^2/(lambda d)) / delta)) + sqrt(lambda) S.
double beta_ridge(const BoundParams& p, double t);

/// Forward-estimator radius: the ridge radius with (sqrt(lambda) + X) S in
/// place of sqrt(lambda) S.
double beta_forward(const BoundParams& p, double t);

/// Leading (log T)^2 term of the high-probability oracle-regret bound for
/// online ridge regression.
double regret_bound_ridge(const BoundParams& p, double T);

/// Leading term for the forward algorithm; equals regret_bound_ridge divided
/// by ridge_front_factor(X, lambda).
double regret_bound_forward(const BoundParams& p, double T);

/// Complete ridge expression including the martingale remainder, where
/// `deviation_sq` is A = sum ((theta_{t-1} - theta_*)^T x_t)^2.
double regret_bound_ridge_full(const BoundParams& p, double T, double deviation_sq, double sigma_prime = 1.0);

/// The aggregated forward expression as derived for the forward ellipsoid.
/// Its first term carries the ridge front factor; reported separately from
/// the leading term.
double regret_bound_forward_full(const BoundParams& p, double T, double deviation_sq, double sigma_prime = 1.0);

/// Online-to-offline bounds for bounded observations: c Y^2 d log(1 + T X^2/(lambda d))
/// with c = 4 (ridge) or 1 (forward), plus lambda Y^2 T / lambda_r when the
/// smallest positive eigenvalue lambda_r of G_T(0) is given.
double adversarial_bound(Algo algo, double Y, const BoundParams& p, double T,
                         std::optional<double> smallest_positive_eigenvalue = std::nullopt);

/// Method-of-mixtures envelope sigma sqrt(2 (1/sigma'^2 + A) log(sqrt(1 + sigma'^2 A) / delta)).
double tail_bound(double A, double sigma, double sigma_prime, double delta);

/// Cap on sum_t ||x_t||^2 in G_t^{-1} (forward) or G_{t-1}^{-1} (ridge).
/// For the forward lemma, `lambda_min` replaces lambda inside the log.
double feature_budget(Variant lemma, const BoundParams& p, double T, std::optional<double> lambda_min = std::nullopt);

/// Pseudo-regret bounds of OFUL (ridge) and OFUL^f (forward) without bounded
/// mean rewards.
double oful_regret_bound(Variant variant, const BoundParams& p, double T);

/// sum_{k<n} gamma^{2k} = (1 - gamma^{2n}) / (1 - gamma^2), equal to n at gamma = 1.
double discounted_count(double gamma, double n);

/// D-LinUCB radius after n past rounds:
/// offset + sigma sqrt(2 log(1/delta) + d log(1 + X^2 discounted_count / (lambda d))),
/// with offset sqrt(lambda) S (ridge) or (sqrt(lambda) + action_norm) S (forward).
double dlinucb_beta(Variant variant, const BoundParams& p, double n, double gamma, double action_norm = 0.0);

struct DLinUcbBoundTerms {
  double drift = 0.0;  // 2 X D B_T
  double bias = 0.0;   // (4 X^3 S / lambda) gamma^D / (1 - gamma) T
  double width = 0.0;  // confidence-width term
  double total() const noexcept { return drift + bias + width; }
};

DLinUcbBoundTerms dlinucb_regret_terms(Variant variant, const BoundParams& p, double T, double gamma, double D,
                                       double variation_budget);

inline double dlinucb_regret_bound(Variant variant, const BoundParams& p, double T, double gamma, double D,
                                   double variation_budget) {
  return dlinucb_regret_terms(variant, p, T, gamma, D, variation_budget).total();
}

}  // namespace fwdreg
