// Command-line front end for the experiment harness.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fwdreg/harness.hpp"

namespace {

using namespace fwdreg;

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> threads;
  bool summary_only = false;
  bool dump_config = false;
};

void add_common(CLI::App* cmd, Options& o, bool simulated) {
  auto* cfg = cmd->add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  auto* pre = cmd->add_option("--preset", o.preset_name, "built-in configuration")
                  ->check(CLI::IsMember(preset_names()));
  cfg->excludes(pre);
  cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd->add_flag("--dump-config", o.dump_config, "print the resolved configuration as JSON and exit");
  if (!simulated) return;
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--replicates", o.replicates, "number of replicates")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "worker threads (0: all hardware threads)");
  cmd->add_flag("--summary-only", o.summary_only, "skip the per-replicate trace file");
}

ExperimentConfig load(const Options& o, ExperimentKind expected, std::string_view sub) {
  if (o.config_path.empty() && o.preset_name.empty()) throw std::invalid_argument("one of --config or --preset is required");
  ExperimentConfig c = o.preset_name.empty() ? load_config(o.config_path) : preset(o.preset_name);
  if (c.kind != expected) {
    throw std::invalid_argument("subcommand '" + std::string(sub) + "' cannot run a config of kind '" +
                                std::string(kind_name(c.kind)) + "'");
  }
  if (o.seed) c.master_seed = *o.seed;
  if (o.replicates) c.replicates = *o.replicates;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

int simulate(const Options& o, ExperimentKind kind, std::string_view sub) {
  const auto config = load(o, kind, sub);
  if (o.dump_config) {
    std::cout << config_to_json(config).dump(2) << '\n';
    return 0;
  }
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_experiment(config);
  const auto files = emit_outputs(result, o.out_dir, !o.summary_only);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cerr << kind_name(config.kind) << ": " << result.algos.size() << " algorithms x " << config.replicates
            << " replicates, T = " << config.horizon() << ", " << secs << " s\n";
  for (const auto& s : result.summary) {
    const auto& last = s.points.back().metrics[1];
    const auto& a = result.algos[s.algo];
    std::cerr << "  " << a.name << " lambda=" << format_double(a.lambda);
    if (!a.is_regressor && a.gamma < 1.0) std::cerr << " gamma=" << format_double(a.gamma) << " D=" << a.D;
    std::cerr << "  final cum_regret mean=" << last.mean << " median=" << last.median << '\n';
  }
  for (const auto& f : files) std::cerr << "  wrote " << f.string() << '\n';
  return 0;
}

int tabulate(const Options& o) {
  const auto config = load(o, ExperimentKind::bounds_table, "bounds");
  if (o.dump_config) {
    std::cout << config_to_json(config).dump(2) << '\n';
    return 0;
  }
  std::ostringstream buf;
  write_bounds_csv(buf, bounds_table(config));
  const auto path = std::filesystem::path(o.out_dir) / config.outputs.bounds;
  write_file(path, buf.str());
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online ridge and forward regression experiments"};
  app.require_subcommand(1);
  Options regress_opts, bandit_opts, drift_opts, bounds_opts;
  auto* regress = app.add_subcommand("regress", "online regression experiments");
  auto* bandit = app.add_subcommand("bandit", "stationary linear bandit experiments");
  auto* drift = app.add_subcommand("drift", "drifting-parameter bandit experiments");
  auto* bounds = app.add_subcommand("bounds", "tabulate bound evaluators over a horizon grid");
  add_common(regress, regress_opts, true);
  add_common(bandit, bandit_opts, true);
  add_common(drift, drift_opts, true);
  add_common(bounds, bounds_opts, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (regress->parsed()) return simulate(regress_opts, ExperimentKind::regression, "regress");
    if (bandit->parsed()) return simulate(bandit_opts, ExperimentKind::bandit, "bandit");
    if (drift->parsed()) return simulate(drift_opts, ExperimentKind::nonstationary, "drift");
    return tabulate(bounds_opts);
  } catch (const std::exception& e) {
    std::cerr << "fwdreg: error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
