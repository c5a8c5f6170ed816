#include "fwdreg/bandits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <string>

#include "fwdreg/kernels.hpp"

namespace fwdreg {
namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> view(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> view_mut(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void require_dim(std::size_t dim, std::span<const double> x) {
  if (x.size() != dim) {
    throw std::invalid_argument("action has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(dim));
  }
}

double norm(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

Selection first_max(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty action set");
  Selection best{0, values[0]};
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > best.value) best = {i, values[i]};
  }
  return best;
}

}  // namespace

std::string_view bandit_algo_name(BanditAlgo algo) noexcept {
  switch (algo) {
    case BanditAlgo::oful: return "oful";
    case BanditAlgo::oful_forward: return "oful_forward";
    case BanditAlgo::dlinucb: return "dlinucb";
    case BanditAlgo::dlinucb_forward: return "dlinucb_forward";
  }
  return "unknown";
}

std::optional<BanditAlgo> parse_bandit_algo(std::string_view name) noexcept {
  if (name == "oful") return BanditAlgo::oful;
  if (name == "oful_forward") return BanditAlgo::oful_forward;
  if (name == "dlinucb") return BanditAlgo::dlinucb;
  if (name == "dlinucb_forward") return BanditAlgo::dlinucb_forward;
  return std::nullopt;
}

Selection select_action(std::span<const Vector> actions, const std::function<double(const Vector&)>& index_fn) {
  if (actions.empty()) throw std::invalid_argument("empty action set");
  std::vector<double> values;
  values.reserve(actions.size());
  for (const auto& a : actions) values.push_back(index_fn(a));
  return first_max(values);
}

double pseudo_regret_step(const Vector& theta_star, std::span<const Vector> actions, std::size_t chosen) {
  if (chosen >= actions.size()) throw std::out_of_range("chosen action out of range");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& a : actions) best = std::max(best, a.dot(theta_star));
  return std::max(0.0, best - actions[chosen].dot(theta_star));
}

Selection BanditAgent::choose(std::span<const Vector> actions) {
  const auto values = indices(actions);
  return first_max(values);
}

// --- OFUL ---------------------------------------------------------------

Oful::Oful(std::size_t dim, const BoundParams& params)
    : params_(params), design_(dim, params.lambda), theta_(Vector::Zero(static_cast<Eigen::Index>(dim))) {
  params_.d = dim;
  params_.validate();
}

double Oful::index(std::span<const double> x) const {
  require_dim(design_.dim(), x);
  const double width = std::sqrt(design_.mahalanobis_sq(x));
  const double beta = beta_ridge(params_, static_cast<double>(design_.count()));
  return kernels::dot(x, view(theta_)) + beta * width;
}

std::vector<double> Oful::indices(std::span<const Vector> actions) {
  std::vector<double> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(index(view(a)));
  return out;
}

void Oful::update(std::span<const double> x, double reward) {
  require_dim(design_.dim(), x);
  design_.update(x, reward);
  theta_ = design_.solve_theta();
}

// --- OFUL^f -------------------------------------------------------------

OfulForward::OfulForward(std::size_t dim, const BoundParams& params)
    : params_(params), design_(dim, params.lambda), theta_(Vector::Zero(static_cast<Eigen::Index>(dim))) {
  params_.d = dim;
  params_.validate();
}

double OfulForward::forward_estimate(std::span<const double> x) const {
  require_dim(design_.dim(), x);
  // <x, (G + x x^T)^{-1} b> = <x, theta> - m (u^T b) / (1 + m) with u = G^{-1} x
  const Vector u = design_.apply_inverse(x);
  const double m = std::max(0.0, kernels::dot(x, view(u)));
  const double ub = kernels::dot(view(u), view(design_.b()));
  return kernels::dot(x, view(theta_)) - m * ub / (1.0 + m);
}

double OfulForward::radius(std::span<const double> x) const {
  const double d = static_cast<double>(params_.d);
  const double t = static_cast<double>(design_.count() + 1);
  const double xn = norm(x);
  const double Xt = std::max(xn, running_X_);
  const double growth = std::log1p(t * Xt * Xt / (params_.lambda * d));
  const double exploration = params_.sigma * std::sqrt(d * growth + 2.0 * std::log(1.0 / params_.delta));
  return (std::sqrt(params_.lambda) + xn) * params_.S + exploration;
}

double OfulForward::index(std::span<const double> x) const {
  require_dim(design_.dim(), x);
  const Vector u = design_.apply_inverse(x);
  const double m = std::max(0.0, kernels::dot(x, view(u)));
  const double ub = kernels::dot(view(u), view(design_.b()));
  const double estimate = kernels::dot(x, view(theta_)) - m * ub / (1.0 + m);
  // ||x||^2 in (G + x x^T)^{-1} is m / (1 + m)
  return estimate + std::sqrt(m / (1.0 + m)) * radius(x);
}

std::vector<double> OfulForward::indices(std::span<const Vector> actions) {
  std::vector<double> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(index(view(a)));
  return out;
}

void OfulForward::update(std::span<const double> x, double reward) {
  require_dim(design_.dim(), x);
  running_X_ = std::max(running_X_, norm(x));
  design_.update(x, reward);
  theta_ = design_.solve_theta();
}

// --- D-LinUCB -----------------------------------------------------------

DiscountedState::DiscountedState(std::size_t dim, double lambda_, double gamma_) : gamma(gamma_), lambda(lambda_) {
  if (dim == 0) throw std::invalid_argument("dimension must be at least 1");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw std::invalid_argument("gamma must lie in (0,1]");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("D-LinUCB requires lambda > 0");
  const auto n = static_cast<Eigen::Index>(dim);
  V = lambda_ * Matrix::Identity(n, n);
  V_tilde = V;
  b = Vector::Zero(n);
}

void DiscountedState::update(std::span<const double> x, double reward) {
  require_dim(static_cast<std::size_t>(b.size()), x);
  const auto xv = Eigen::Map<const Vector>(x.data(), b.size());
  const auto n = V.rows();
  if (gamma == 1.0) {
    V.noalias() += xv * xv.transpose();
    V_tilde.noalias() += xv * xv.transpose();
    b += reward * xv;
  } else {
    const double g2 = gamma * gamma;
    V = gamma * V + (1.0 - gamma) * lambda * Matrix::Identity(n, n);
    V.noalias() += xv * xv.transpose();
    V_tilde = g2 * V_tilde + (1.0 - g2) * lambda * Matrix::Identity(n, n);
    V_tilde.noalias() += xv * xv.transpose();
    b = gamma * b + reward * xv;
  }
  ++t;
}

DLinUcb::DLinUcb(Variant variant, std::size_t dim, const BoundParams& params, double gamma)
    : variant_(variant), params_(params), state_(dim, params.lambda, gamma) {
  params_.d = dim;
  params_.validate();
}

DLinUcb::DLinUcb(Variant variant, DiscountedState state, const BoundParams& params)
    : variant_(variant), params_(params), state_(std::move(state)) {
  params_.d = static_cast<std::size_t>(state_.b.size());
  params_.lambda = state_.lambda;
  params_.validate();
}

double DLinUcb::beta(double action_norm) const {
  return dlinucb_beta(variant_, params_, static_cast<double>(state_.t), state_.gamma, action_norm);
}

std::vector<double> DLinUcb::indices(std::span<const Vector> actions) {
  if (actions.empty()) throw std::invalid_argument("empty action set");
  const auto n = state_.V.rows();
  const Eigen::LLT<Matrix> llt(state_.V);
  const Matrix v_inv = llt.solve(Matrix::Identity(n, n));
  const Vector theta = llt.solve(state_.b);
  const double base_beta = beta();

  std::vector<double> out;
  out.reserve(actions.size());
  Vector w(n);
  Vector tw(n);
  for (const auto& a : actions) {
    require_dim(static_cast<std::size_t>(n), view(a));
    kernels::symv(view(v_inv), view(a), view_mut(w));
    if (variant_ == Variant::ridge) {
      // a^T V^{-1} V~ V^{-1} a
      kernels::symv(view(state_.V_tilde), view(w), view_mut(tw));
      const double width = std::sqrt(std::max(0.0, kernels::dot(view(w), view(tw))));
      out.push_back(kernels::dot(view(a), view(theta)) + base_beta * width);
    } else {
      // V_a = V + a a^T, V~_a = V~ + a a^T, V_a^{-1} a = w / (1 + m)
      const double m = std::max(0.0, kernels::dot(view(a), view(w)));
      kernels::symv(view(state_.V_tilde), view(w), view_mut(tw));
      const double quad = std::max(0.0, kernels::dot(view(w), view(tw))) + m * m;
      const double width = std::sqrt(quad) / (1.0 + m);
      const double estimate = kernels::dot(view(a), view(theta)) / (1.0 + m);
      out.push_back(estimate + beta(a.norm()) * width);
    }
  }
  return out;
}

void DLinUcb::update(std::span<const double> x, double reward) { state_.update(x, reward); }

Selection dlinucb_step(DiscountedState& state, std::span<const Vector> actions, Variant variant,
                       const BoundParams& params, const std::function<double(const Vector&)>& reward) {
  DLinUcb agent(variant, state, params);
  const Selection chosen = agent.choose(actions);
  state.update(view(actions[chosen.index]), reward(actions[chosen.index]));
  return chosen;
}

std::unique_ptr<BanditAgent> make_agent(const BanditAgentSpec& spec, std::size_t dim, const BoundParams& params) {
  switch (spec.algo) {
    case BanditAlgo::oful: return std::make_unique<Oful>(dim, params);
    case BanditAlgo::oful_forward: return std::make_unique<OfulForward>(dim, params);
    case BanditAlgo::dlinucb: return std::make_unique<DLinUcb>(Variant::ridge, dim, params, spec.gamma);
    case BanditAlgo::dlinucb_forward: return std::make_unique<DLinUcb>(Variant::forward, dim, params, spec.gamma);
  }
  throw std::invalid_argument("unknown bandit algorithm");
}

}  // namespace fwdreg
