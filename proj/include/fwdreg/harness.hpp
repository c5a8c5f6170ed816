#pragma once

// Config-driven experiment runner: replicated simulations over a thread pool,
// per-step regret traces, cross-replicate summaries and CSV/SVG emission.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fwdreg/bandits.hpp"
#include "fwdreg/bounds.hpp"
#include "fwdreg/environments.hpp"
#include "fwdreg/regressors.hpp"

namespace fwdreg {

enum class ExperimentKind { regression, bandit, nonstationary, bounds_table };

std::string_view kind_name(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_kind(std::string_view name) noexcept;

/// A numeric setting given either literally or as an expression resolved
/// against the horizon: "1/T", "1/log(T)" for lambda, "auto" for gamma and D.
struct Setting {
  double value = 0.0;
  std::string expr;

  static Setting literal(double v) { return {v, {}}; }
  static Setting expression(std::string e) { return {0.0, std::move(e)}; }
  bool is_literal() const noexcept { return expr.empty(); }
};

struct AlgoConfig {
  std::string name;  // ridge, forward, unregularized_forward, oful, oful_forward, dlinucb, dlinucb_forward
  Setting lambda = Setting::literal(1.0);
  Setting gamma = Setting::literal(1.0);
  Setting D = Setting::expression("auto");
};

/// An algorithm with all settings resolved for a concrete environment.
struct ResolvedAlgo {
  std::string name;
  double lambda = 1.0;
  double gamma = 1.0;
  double D = 1.0;
  bool is_regressor = true;
  Algo regressor = Algo::ridge;
  BanditAlgo bandit = BanditAlgo::oful;
};

struct OutputPaths {
  std::string traces = "traces.csv";
  std::string summary = "summary.csv";
  std::string checkpoints = "checkpoints.csv";
  std::string bounds = "bounds.csv";
  std::string svg;  // empty: no chart
};

struct BoundsTableConfig {
  BoundParams params;
  std::vector<double> T_grid;
  double gamma = 0.99;
  double D = 100.0;
  double variation = 0.0;
  double Y = 1.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::regression;
  std::string name;
  std::uint64_t master_seed = 1;
  std::size_t replicates = 1;
  double delta = 0.05;
  double S = 1.0;  // bound on ||theta_*|| used by the overlays and indices
  std::size_t threads = 0;  // 0: one per hardware thread
  bool record_diagnostics = true;

  /// Seeds and (when `draw_theta_star`) theta_* are replaced per replicate.
  RegressionEnvSpec regression;
  BanditEnvSpec bandit;
  bool draw_theta_star = true;

  std::vector<AlgoConfig> algos;
  BoundsTableConfig bounds;
  OutputPaths outputs;

  std::size_t horizon() const noexcept;
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  std::vector<ResolvedAlgo> resolve_algos() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<std::string> preset_names();
/// Built-in configurations of the reference experiments.
ExperimentConfig preset(std::string_view name);

inline constexpr std::size_t kNumMetrics = 6;
inline constexpr std::array<std::string_view, kNumMetrics> kMetricNames{
    "instant_regret", "cum_regret", "first_term", "second_term", "pseudo_regret", "bound_overlay"};

struct TraceRow {
  std::size_t t = 0;
  std::array<double, kNumMetrics> values{};

  double& instant_regret() { return values[0]; }
  double& cum_regret() { return values[1]; }
  double& first_term() { return values[2]; }
  double& second_term() { return values[3]; }
  double& pseudo_regret() { return values[4]; }
  double& bound_overlay() { return values[5]; }
};

/// Regret against the best fixed parameter in hindsight (batch refit) next to
/// the oracle regret, at logarithmically spaced steps.
struct Checkpoint {
  std::size_t t = 0;
  double batch_regret = 0.0;
  double oracle_regret = 0.0;
};

struct RegretTrace {
  std::size_t algo = 0;  // index into the resolved algorithm list
  std::size_t replicate = 0;
  std::vector<TraceRow> rows;
  std::vector<Checkpoint> checkpoints;
};

struct Stats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quantile of an ascending sample.
double quantile_sorted(const std::vector<double>& sorted, double q);
Stats describe(std::vector<double> values);

struct SummaryPoint {
  std::size_t t = 0;
  std::array<Stats, kNumMetrics> metrics;
};

struct AlgoSummary {
  std::size_t algo = 0;
  std::vector<SummaryPoint> points;
};

/// Per-step statistics across replicates, one block per algorithm index in
/// ascending order. Throws on empty input or ragged traces.
std::vector<AlgoSummary> aggregate(const std::vector<RegretTrace>& traces);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResolvedAlgo> algos;
  std::vector<RegretTrace> traces;  // ordered by (algo, replicate)
  std::vector<AlgoSummary> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Single (algo, replicate) task; exposed for tests.
RegretTrace run_replicate(const ExperimentConfig& config, const std::vector<ResolvedAlgo>& algos, std::size_t algo,
                          std::size_t replicate);

/// Logarithmic checkpoint grid: powers of two up to T, plus T.
std::vector<std::size_t> checkpoint_steps(std::size_t T);

// --- Output -----------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "kind,algo,lambda,gamma,replicate,t,instant_regret,cum_regret,first_term,second_term,pseudo_regret,"
    "bound_overlay";

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

void write_traces_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
void write_checkpoints_csv(std::ostream& out, const ExperimentResult& result);

/// Writes `text` to `path`, throwing std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Emits the configured outputs below `dir`; returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                                                bool include_traces = true);

struct BoundsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

BoundsTable bounds_table(const ExperimentConfig& config);
void write_bounds_csv(std::ostream& out, const BoundsTable& table);

/// Mean-cumulative-regret line chart with interquartile bands.
std::string render_svg(const ExperimentResult& result);

}  // namespace fwdreg
