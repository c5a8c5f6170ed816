#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fwdreg/harness.hpp"

namespace fwdreg {
namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

BoundParams overlay_params(const ExperimentConfig& c, const ResolvedAlgo& a, double sigma, double X, std::size_t d) {
  BoundParams p;
  p.sigma = sigma;
  p.S = c.S;
  p.X = X;
  p.lambda = a.lambda;
  p.delta = c.delta;
  p.d = d;
  return p;
}

RegretTrace run_regression(const ExperimentConfig& c, const ResolvedAlgo& a, std::uint64_t seed) {
  RegressionEnvSpec env = c.regression;
  env.seed = seed;
  if (c.draw_theta_star) env.theta_star = draw_theta_star(seed, env.d);
  env.validate();

  OnlineRegressor reg(a.regressor, env.d, a.lambda);
  const bool has_overlay = a.regressor != Algo::unregularized_forward;
  const BoundParams p = overlay_params(c, a, env.sigma, env.feature_bound(), env.d);

  const auto grid = c.record_diagnostics ? checkpoint_steps(env.T) : std::vector<std::size_t>{};
  auto next_checkpoint = grid.begin();
  std::vector<Vector> xs;
  std::vector<double> ys;
  if (!grid.empty()) {
    xs.reserve(env.T);
    ys.reserve(env.T);
  }

  RegretTrace trace;
  trace.rows.reserve(env.T);
  double cum = 0.0;
  double learner_loss = 0.0;
  for (std::size_t t = 1; t <= env.T; ++t) {
    auto sample = gen_regression_step(env, t);
    reg.predict(view(sample.x));
    if (c.record_diagnostics && !trace.rows.empty()) {
      if (const auto second = reg.previous_second_term()) trace.rows.back().second_term() = *second;
    }
    const auto diag = reg.observe(view(sample.x), sample.y, &env.theta_star);
    cum += diag.instant_oracle_regret;
    learner_loss += diag.loss;

    TraceRow row;
    row.t = t;
    row.instant_regret() = diag.instant_oracle_regret;
    row.cum_regret() = cum;
    if (c.record_diagnostics) row.first_term() = diag.first_term;
    if (has_overlay) {
      const double T = static_cast<double>(t);
      row.bound_overlay() = a.regressor == Algo::ridge ? regret_bound_ridge(p, T) : regret_bound_forward(p, T);
    }
    trace.rows.push_back(row);

    if (!grid.empty()) {
      xs.push_back(std::move(sample.x));
      ys.push_back(sample.y);
      if (next_checkpoint != grid.end() && *next_checkpoint == t) {
        const auto fit = batch_ols(std::span(xs.data(), t), std::span(ys.data(), t));
        trace.checkpoints.push_back({t, learner_loss - fit.loss, cum});
        ++next_checkpoint;
      }
    }
  }
  return trace;
}

RegretTrace run_bandit(const ExperimentConfig& c, const ResolvedAlgo& a, std::uint64_t seed) {
  BanditEnvSpec env = c.bandit;
  env.seed = seed;
  if (c.draw_theta_star) env.theta_star.resize(0);
  const BanditEnvironment world(env);

  const BoundParams p = overlay_params(c, a, env.sigma, env.max_norm, env.d);
  auto agent = make_agent({a.bandit, a.gamma}, env.d, p);

  RegretTrace trace;
  trace.rows.reserve(env.T);
  double cum = 0.0;
  double variation = 0.0;
  Vector prev_theta;
  for (std::size_t t = 1; t <= env.T; ++t) {
    const auto round = world.round(t);
    if (t > 1) variation += (round.theta_star - prev_theta).norm();
    prev_theta = round.theta_star;

    const auto chosen = agent->choose(round.actions);
    const Vector& x = round.actions[chosen.index];
    agent->update(view(x), world.reward(t, x));
    const double inst = pseudo_regret_step(round.theta_star, round.actions, chosen.index);
    cum += inst;

    TraceRow row;
    row.t = t;
    row.instant_regret() = inst;
    row.cum_regret() = cum;
    row.pseudo_regret() = cum;
    const double T = static_cast<double>(t);
    switch (a.bandit) {
      case BanditAlgo::oful: row.bound_overlay() = oful_regret_bound(Variant::ridge, p, T); break;
      case BanditAlgo::oful_forward: row.bound_overlay() = oful_regret_bound(Variant::forward, p, T); break;
      case BanditAlgo::dlinucb:
      case BanditAlgo::dlinucb_forward:
        if (a.gamma < 1.0) {
          const auto variant = a.bandit == BanditAlgo::dlinucb ? Variant::ridge : Variant::forward;
          row.bound_overlay() = dlinucb_regret_bound(variant, p, T, a.gamma, a.D, variation);
        }
        break;
    }
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace

std::vector<std::size_t> checkpoint_steps(std::size_t T) {
  std::vector<std::size_t> out;
  for (std::size_t t = 1; t < T; t *= 2) out.push_back(t);
  if (T > 0) out.push_back(T);
  return out;
}

RegretTrace run_replicate(const ExperimentConfig& config, const std::vector<ResolvedAlgo>& algos, std::size_t algo,
                          std::size_t replicate) {
  if (algo >= algos.size()) throw std::out_of_range("algorithm index out of range");
  const std::uint64_t seed = derive_replicate_seed(config.master_seed, replicate);
  RegretTrace trace = algos[algo].is_regressor ? run_regression(config, algos[algo], seed)
                                               : run_bandit(config, algos[algo], seed);
  trace.algo = algo;
  trace.replicate = replicate;
  return trace;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Stats describe(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("describe: empty sample");
  Stats s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  std::sort(values.begin(), values.end());
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  return s;
}

std::vector<AlgoSummary> aggregate(const std::vector<RegretTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  std::size_t n_algos = 0;
  for (const auto& tr : traces) n_algos = std::max(n_algos, tr.algo + 1);

  std::vector<std::vector<const RegretTrace*>> by_algo(n_algos);
  for (const auto& tr : traces) by_algo[tr.algo].push_back(&tr);

  std::vector<AlgoSummary> out;
  std::vector<double> column;
  for (std::size_t a = 0; a < n_algos; ++a) {
    auto& group = by_algo[a];
    if (group.empty()) continue;
    std::sort(group.begin(), group.end(), [](const auto* x, const auto* y) { return x->replicate < y->replicate; });
    const std::size_t steps = group.front()->rows.size();
    for (const auto* tr : group) {
      if (tr->rows.size() != steps) throw std::invalid_argument("aggregate: traces of unequal length");
    }
    AlgoSummary summary;
    summary.algo = a;
    summary.points.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      auto& point = summary.points[i];
      point.t = group.front()->rows[i].t;
      for (std::size_t m = 0; m < kNumMetrics; ++m) {
        column.clear();
        for (const auto* tr : group) column.push_back(tr->rows[i].values[m]);
        point.metrics[m] = describe(column);
      }
    }
    out.push_back(std::move(summary));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.kind == ExperimentKind::bounds_table) {
    throw std::invalid_argument("bounds_table configs are evaluated by bounds_table(), not simulated");
  }
  ExperimentResult result;
  result.config = config;
  result.algos = config.resolve_algos();

  const std::size_t reps = config.replicates;
  const std::size_t tasks = result.algos.size() * reps;
  result.traces.resize(tasks);

  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, tasks);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        result.traces[i] = run_replicate(config, result.algos, i / reps, i % reps);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  result.summary = aggregate(result.traces);
  return result;
}

}  // namespace fwdreg
