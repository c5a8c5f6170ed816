#include "fwdreg/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace fwdreg {
namespace {

void require_horizon(double T) {
  if (!(T >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
}

// log(1 + T X^2 / (lambda d))
double log_growth(const BoundParams& p, double T) {
  return std::log1p(T * p.X * p.X / (p.lambda * static_cast<double>(p.d)));
}

}  // namespace

void BoundParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("bounds require lambda > 0");
  if (!(sigma >= 0.0) || !(S >= 0.0) || !(X >= 0.0)) {
    throw std::invalid_argument("sigma, S and X must be nonnegative");
  }
  if (d == 0) throw std::invalid_argument("dimension must be at least 1");
}

double scale_factor(double x) {
  if (x < 1e-8) return 1.0 + 0.5 * x;  // series of x / log1p(x)
  return x / std::log1p(x);
}

double ridge_front_factor(double X, double lambda) { return scale_factor(X * X / lambda); }

double beta_ridge(const BoundParams& p, double t) {
  p.validate();
  require_horizon(t);
  const double d = static_cast<double>(p.d);
  return p.sigma * std::sqrt(d * (log_growth(p, t) - std::log(p.delta))) + std::sqrt(p.lambda) * p.S;
}

double beta_forward(const BoundParams& p, double t) { return beta_ridge(p, t) + p.X * p.S; }

double regret_bound_forward(const BoundParams& p, double T) {
  p.validate();
  require_horizon(T);
  const double d = static_cast<double>(p.d);
  const double growth = log_growth(p, T);
  // log((1 + T X^2/(lambda d))^{d/2} / (delta/2))
  const double confidence = 0.5 * d * growth + std::log(2.0 / p.delta);
  return 2.0 * d * p.sigma * p.sigma * growth * confidence;
}

double regret_bound_ridge(const BoundParams& p, double T) {
  return ridge_front_factor(p.X, p.lambda) * regret_bound_forward(p, T);
}

double regret_bound_ridge_full(const BoundParams& p, double T, double deviation_sq, double sigma_prime) {
  p.validate();
  require_horizon(T);
  const double d = static_cast<double>(p.d);
  const double growth = log_growth(p, T);
  const double radius =
      p.sigma * std::sqrt(d * (growth + std::log(2.0 / p.delta))) + std::sqrt(p.lambda) * p.S;
  const double main = radius * radius * ridge_front_factor(p.X, p.lambda) * d * growth;
  return main + tail_bound(deviation_sq, p.sigma, sigma_prime, p.delta / 2.0);
}

double regret_bound_forward_full(const BoundParams& p, double T, double deviation_sq, double sigma_prime) {
  p.validate();
  require_horizon(T);
  const double d = static_cast<double>(p.d);
  const double growth = log_growth(p, T);
  const double radius = p.sigma * std::sqrt(d * (growth + std::log(2.0 / p.delta))) +
                        (std::sqrt(p.lambda) + p.X) * p.S;
  const double main = radius * radius * ridge_front_factor(p.X, p.lambda) * d * growth;
  return main + tail_bound(deviation_sq, p.sigma, sigma_prime, p.delta);
}

double adversarial_bound(Algo algo, double Y, const BoundParams& p, double T,
                         std::optional<double> smallest_positive_eigenvalue) {
  p.validate();
  require_horizon(T);
  if (!(Y >= 0.0)) throw std::invalid_argument("Y must be nonnegative");
  double c = 0.0;
  switch (algo) {
    case Algo::ridge: c = 4.0; break;
    case Algo::forward: c = 1.0; break;
    case Algo::unregularized_forward:
      throw std::invalid_argument("no adversarial bound is implemented for unregularized_forward");
  }
  double bound = c * Y * Y * static_cast<double>(p.d) * log_growth(p, T);
  if (smallest_positive_eigenvalue) {
    if (!(*smallest_positive_eigenvalue > 0.0)) {
      throw std::invalid_argument("smallest positive eigenvalue must be > 0");
    }
    bound += p.lambda * Y * Y * T / *smallest_positive_eigenvalue;
  }
  return bound;
}

double tail_bound(double A, double sigma, double sigma_prime, double delta) {
  if (!(A >= 0.0)) throw std::invalid_argument("tail_bound: A must be nonnegative");
  if (!(sigma >= 0.0)) throw std::invalid_argument("tail_bound: sigma must be nonnegative");
  if (!(sigma_prime > 0.0)) throw std::invalid_argument("tail_bound: sigma' must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("tail_bound: delta must lie in (0,1)");
  const double sp2 = sigma_prime * sigma_prime;
  const double log_term = 0.5 * std::log1p(sp2 * A) - std::log(delta);
  return sigma * std::sqrt(2.0 * (1.0 / sp2 + A) * log_term);
}

double feature_budget(Variant lemma, const BoundParams& p, double T, std::optional<double> lambda_min) {
  p.validate();
  require_horizon(T);
  const double d = static_cast<double>(p.d);
  if (lemma == Variant::forward) {
    const double floor = lambda_min.value_or(p.lambda);
    if (!(floor > 0.0)) throw std::invalid_argument("lambda_min must be positive");
    return d * std::log1p(T * p.X * p.X / (floor * d));
  }
  return ridge_front_factor(p.X, p.lambda) * d * log_growth(p, T);
}

double oful_regret_bound(Variant variant, const BoundParams& p, double T) {
  p.validate();
  require_horizon(T);
  const double d = static_cast<double>(p.d);
  // log(lambda + T X^2 / d) is negative for tiny lambda*T; the bound is a
  // nonnegative quantity so the factor is floored at 0.
  const double log_volume = std::max(0.0, std::log(p.lambda + T * p.X * p.X / d));
  const double exploration = p.sigma * std::sqrt(2.0 * std::log(1.0 / p.delta) + d * log_growth(p, T));
  if (variant == Variant::ridge) {
    const double front = ridge_front_factor(p.X, p.lambda);
    return 4.0 * std::sqrt(front * T * d * log_volume) * (std::sqrt(p.lambda) * p.S + exploration);
  }
  return 4.0 * std::sqrt(T * d * log_volume) * ((std::sqrt(p.lambda) + p.X) * p.S + exploration);
}

double discounted_count(double gamma, double n) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0,1]");
  if (!(n >= 0.0)) throw std::invalid_argument("round count must be nonnegative");
  if (gamma == 1.0) return n;
  const double lg = std::log(gamma);
  return std::expm1(2.0 * n * lg) / std::expm1(2.0 * lg);
}

double dlinucb_beta(Variant variant, const BoundParams& p, double n, double gamma, double action_norm) {
  p.validate();
  const double d = static_cast<double>(p.d);
  const double growth = std::log1p(p.X * p.X * discounted_count(gamma, n) / (p.lambda * d));
  const double noise = p.sigma * std::sqrt(2.0 * std::log(1.0 / p.delta) + d * growth);
  const double offset = variant == Variant::ridge ? std::sqrt(p.lambda) * p.S
                                                  : (std::sqrt(p.lambda) + action_norm) * p.S;
  return offset + noise;
}

DLinUcbBoundTerms dlinucb_regret_terms(Variant variant, const BoundParams& p, double T, double gamma, double D,
                                       double variation_budget) {
  p.validate();
  require_horizon(T);
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("the D-LinUCB bound needs gamma in (0,1)");
  if (!(D >= 1.0)) throw std::invalid_argument("D must be at least 1");
  if (!(variation_budget >= 0.0)) throw std::invalid_argument("variation budget must be nonnegative");
  DLinUcbBoundTerms terms;
  if (T == 0.0) return terms;
  const double d = static_cast<double>(p.d);
  const double X2 = p.X * p.X;
  terms.drift = 2.0 * p.X * D * variation_budget;
  terms.bias = (4.0 * X2 * p.X * p.S / p.lambda) * std::pow(gamma, D) / (1.0 - gamma) * T;
  const double beta = dlinucb_beta(variant, p, T, gamma, p.X);
  const double forgetting = T * std::log(1.0 / gamma);
  if (variant == Variant::ridge) {
    const double volume = std::log1p(X2 / (d * p.lambda * (1.0 - gamma)));
    terms.width = 2.0 * std::sqrt(2.0) * beta * std::sqrt(d * T) * std::sqrt(forgetting + volume);
  } else {
    const double volume = std::log1p((2.0 - gamma) * X2 / (d * p.lambda * (1.0 - gamma)));
    terms.width = 2.0 * beta * std::sqrt(d * T) * std::sqrt(forgetting + volume);
  }
  return terms;
}

}  // namespace fwdreg
