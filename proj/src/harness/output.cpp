#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fwdreg/harness.hpp"

namespace fwdreg {
namespace {

struct AlgoLabel {
  std::string prefix;  // "kind,algo,lambda,gamma,"
};

std::vector<AlgoLabel> labels(const ExperimentResult& r) {
  std::vector<AlgoLabel> out;
  const std::string kind(kind_name(r.config.kind));
  for (const auto& a : r.algos) {
    const bool discounted = !a.is_regressor && (a.bandit == BanditAlgo::dlinucb || a.bandit == BanditAlgo::dlinucb_forward);
    out.push_back({kind + ',' + a.name + ',' + format_double(a.lambda) + ',' + format_double(discounted ? a.gamma : 1.0) +
                   ','});
  }
  return out;
}

void append_values(std::string& line, const std::array<double, kNumMetrics>& values) {
  for (double v : values) {
    line += ',';
    line += format_double(v);
  }
}

std::string fixed(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

constexpr std::array<std::string_view, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_traces_csv(std::ostream& out, const ExperimentResult& result) {
  out << kCsvHeader << '\n';
  const auto lab = labels(result);
  std::string line;
  for (const auto& tr : result.traces) {
    for (const auto& row : tr.rows) {
      line = lab[tr.algo].prefix;
      line += std::to_string(tr.replicate);
      line += ',';
      line += std::to_string(row.t);
      append_values(line, row.values);
      line += '\n';
      out << line;
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << kCsvHeader << '\n';
  const auto lab = labels(result);
  constexpr std::array<std::string_view, 5> stat_names{"mean", "std", "q1", "median", "q3"};
  constexpr std::array<double Stats::*, 5> members{&Stats::mean, &Stats::std, &Stats::q1, &Stats::median, &Stats::q3};
  std::string line;
  for (const auto& s : result.summary) {
    for (std::size_t k = 0; k < stat_names.size(); ++k) {
      for (const auto& p : s.points) {
        line = lab[s.algo].prefix;
        line += stat_names[k];
        line += ',';
        line += std::to_string(p.t);
        for (const auto& m : p.metrics) {
          line += ',';
          line += format_double(m.*members[k]);
        }
        line += '\n';
        out << line;
      }
    }
  }
}

void write_checkpoints_csv(std::ostream& out, const ExperimentResult& result) {
  out << "kind,algo,lambda,gamma,replicate,t,batch_regret,oracle_regret\n";
  const auto lab = labels(result);
  for (const auto& tr : result.traces) {
    for (const auto& c : tr.checkpoints) {
      out << lab[tr.algo].prefix << tr.replicate << ',' << c.t << ',' << format_double(c.batch_regret) << ','
          << format_double(c.oracle_regret) << '\n';
    }
  }
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                                                bool include_traces) {
  std::vector<std::filesystem::path> written;
  const auto& o = result.config.outputs;
  auto emit = [&](const std::string& name, auto&& writer) {
    if (name.empty()) return;
    std::ostringstream buf;
    writer(buf);
    const auto path = dir / name;
    write_file(path, buf.str());
    written.push_back(path);
  };
  if (include_traces) emit(o.traces, [&](std::ostream& s) { write_traces_csv(s, result); });
  emit(o.summary, [&](std::ostream& s) { write_summary_csv(s, result); });
  if (result.config.record_diagnostics && result.config.kind == ExperimentKind::regression) {
    emit(o.checkpoints, [&](std::ostream& s) { write_checkpoints_csv(s, result); });
  }
  emit(o.svg, [&](std::ostream& s) { s << render_svg(result); });
  return written;
}

BoundsTable bounds_table(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != ExperimentKind::bounds_table) throw std::invalid_argument("bounds_table needs a bounds_table config");
  const auto& b = config.bounds;
  const auto& p = b.params;
  BoundsTable table;
  table.columns = {"T",
                   "regret_ridge",
                   "regret_forward",
                   "feature_budget_ridge",
                   "feature_budget_forward",
                   "oful_ridge",
                   "oful_forward",
                   "dlinucb_ridge",
                   "dlinucb_forward",
                   "adversarial_ridge",
                   "adversarial_forward"};
  for (double T : b.T_grid) {
    std::vector<double> row(table.columns.size(), 0.0);
    row[0] = T;
    if (T > 0.0) {
      row[1] = regret_bound_ridge(p, T);
      row[2] = regret_bound_forward(p, T);
      row[3] = feature_budget(Variant::ridge, p, T);
      row[4] = feature_budget(Variant::forward, p, T);
      row[5] = oful_regret_bound(Variant::ridge, p, T);
      row[6] = oful_regret_bound(Variant::forward, p, T);
      row[7] = dlinucb_regret_bound(Variant::ridge, p, T, b.gamma, b.D, b.variation);
      row[8] = dlinucb_regret_bound(Variant::forward, p, T, b.gamma, b.D, b.variation);
      row[9] = adversarial_bound(Algo::ridge, b.Y, p, T);
      row[10] = adversarial_bound(Algo::forward, b.Y, p, T);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_bounds_csv(std::ostream& out, const BoundsTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

std::string render_svg(const ExperimentResult& result) {
  constexpr double W = 720, H = 440, L = 70, R = 170, Top = 20, B = 50;
  const double pw = W - L - R, ph = H - Top - B;
  constexpr std::size_t cum = 1;

  double t_max = 1.0, y_max = 0.0;
  for (const auto& s : result.summary) {
    for (const auto& p : s.points) {
      t_max = std::max(t_max, static_cast<double>(p.t));
      y_max = std::max({y_max, p.metrics[cum].mean, p.metrics[cum].q3});
    }
  }
  if (!(y_max > 0.0)) y_max = 1.0;
  auto sx = [&](double t) { return fixed(L + pw * t / t_max); };
  auto sy = [&](double y) { return fixed(Top + ph * (1.0 - y / y_max)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << Top + ph << "\" x2=\"" << L + pw << "\" y2=\"" << Top + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << Top << "\" x2=\"" << L << "\" y2=\"" << Top + ph << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = t_max * k / 4.0, y = y_max * k / 4.0;
    svg << "<text x=\"" << sx(t) << "\" y=\"" << fixed(Top + ph + 18) << "\" text-anchor=\"middle\">" << format_double(std::round(t)) << "</text>\n";
    svg << "<text x=\"" << fixed(L - 6) << "\" y=\"" << sy(y) << "\" text-anchor=\"end\">" << fixed(y) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(L + pw / 2) << "\" y=\"" << fixed(H - 10) << "\" text-anchor=\"middle\">t</text>\n";

  for (std::size_t i = 0; i < result.summary.size(); ++i) {
    const auto& s = result.summary[i];
    const auto colour = kPalette[i % kPalette.size()];
    const auto& a = result.algos[s.algo];
    std::string band, line;
    for (const auto& p : s.points) band += sx(static_cast<double>(p.t)) + ',' + sy(p.metrics[cum].q3) + ' ';
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
      band += sx(static_cast<double>(it->t)) + ',' + sy(it->metrics[cum].q1) + ' ';
    }
    for (const auto& p : s.points) line += sx(static_cast<double>(p.t)) + ',' + sy(p.metrics[cum].mean) + ' ';
    svg << "<polygon points=\"" << band << "\" fill=\"" << colour << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"/>\n";
    const double ly = Top + 16.0 * static_cast<double>(i + 1);
    svg << "<text x=\"" << fixed(L + pw + 10) << "\" y=\"" << fixed(ly) << "\" fill=\"" << colour << "\">" << a.name
        << " lambda=" << format_double(a.lambda) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fwdreg
