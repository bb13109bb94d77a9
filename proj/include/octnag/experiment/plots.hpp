#pragma once
//
// Renders the standard charts of a run directory from its CSV artifacts.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "octnag/experiment/csv.hpp"
#include "octnag/experiment/svg.hpp"

namespace octnag::experiment {

struct PlotMeta {
  int agents = 1;
  int dim = 1;
  int coordinate = 0;
};

namespace plot_detail {

// Thins long series to at most `limit` points with a fixed stride.
inline void thin(Series& s, std::size_t limit = 4000) {
  if (s.x.size() <= limit) return;
  const std::size_t stride = (s.x.size() + limit - 1) / limit;
  Series out{s.label, {}, {}, s.dashed, s.markers};
  for (std::size_t k = 0; k < s.x.size(); k += stride) {
    out.x.push_back(s.x[k]);
    out.y.push_back(s.y[k]);
  }
  if ((s.x.size() - 1) % stride != 0) {
    out.x.push_back(s.x.back());
    out.y.push_back(s.y.back());
  }
  s = std::move(out);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed on " + path.string());
}

inline Chart state_chart(const CsvTable& traj, const CsvTable* gap, const PlotMeta& meta) {
  const std::string c = std::to_string(meta.coordinate);
  Chart chart{"State vs optimum, coordinate " + c, "t", "x_" + c, {}};
  const auto t = traj.numbers("t");
  for (int j = 0; j < meta.agents; ++j) {
    const std::string col = "x_" + std::to_string(j * meta.dim + meta.coordinate);
    if (!traj.has(col)) continue;
    Series s{meta.agents == 1 ? "x(t)" : "agent " + std::to_string(j + 1), t, traj.numbers(col)};
    thin(s);
    chart.series.push_back(std::move(s));
  }
  if (gap && gap->has("xstar_" + c)) {
    Series s{"x*(t)", gap->numbers("t"), gap->numbers("xstar_" + c), true};
    thin(s);
    chart.series.push_back(std::move(s));
  }
  return chart;
}

inline Chart gap_chart(const CsvTable& gap) {
  Chart chart{"Instantaneous gap", "t", "gap", {}};
  const std::string time_col = gap.has("t_k") ? "t_k" : "t";
  const auto t = gap.numbers(time_col);
  for (const auto& name : gap.header) {
    std::string label;
    if (name == "dynamic_gap" || name == "gap") {
      label = "f_t(x) - f_t(x*_t)";
    } else if (name.rfind("static_gap_T", 0) == 0) {
      label = "f_t(x) - f_t(x~(" + name.substr(12) + "))";
    } else {
      continue;
    }
    Series s{label, t, gap.numbers(name)};
    thin(s);
    chart.series.push_back(std::move(s));
  }
  return chart;
}

inline Chart regret_chart(const CsvTable& regret) {
  Chart chart{"Regret vs horizon", "T", "regret", {}};
  const auto T = regret.numbers("T");
  const auto kind = regret.strings("kind");
  const auto value = regret.numbers("value");
  std::vector<std::string> kinds;
  for (const auto& k : kind) {
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  for (const auto& k : kinds) {
    Series s{k, {}, {}, false, true};
    for (std::size_t i = 0; i < kind.size(); ++i) {
      if (kind[i] == k) {
        s.x.push_back(T[i]);
        s.y.push_back(value[i]);
      }
    }
    chart.series.push_back(std::move(s));
  }
  return chart;
}

}  // namespace plot_detail

// Writes <plot>.svg for each requested plot whose CSV inputs exist and
// returns the written file names. Missing inputs raise IoError.
inline std::vector<std::string> emit_plots(const std::filesystem::path& dir, const std::vector<std::string>& plots,
                                           const PlotMeta& meta) {
  namespace fs = std::filesystem;
  using namespace plot_detail;
  std::vector<std::string> written;
  auto need = [&](const char* file) {
    const fs::path p = dir / file;
    if (!fs::exists(p)) throw Error(ErrorKind::IoError, "missing artifact " + p.string());
    return read_csv(p);
  };
  for (const auto& plot : plots) {
    Chart chart;
    if (plot == "state") {
      const CsvTable traj = need("trajectory.csv");
      if (fs::exists(dir / "gap.csv")) {
        const CsvTable gap = read_csv(dir / "gap.csv");
        chart = state_chart(traj, &gap, meta);
      } else {
        chart = state_chart(traj, nullptr, meta);
      }
    } else if (plot == "gap") {
      chart = gap_chart(fs::exists(dir / "iterates.csv") ? read_csv(dir / "iterates.csv") : need("gap.csv"));
    } else if (plot == "regret") {
      chart = regret_chart(need("regret.csv"));
    } else {
      throw Error(ErrorKind::ConfigError, "unknown plot '" + plot + "'");
    }
    write_text(dir / (plot + ".svg"), render_svg(chart));
    written.push_back(plot + ".svg");
  }
  return written;
}

// Plot metadata recovered from a run's summary.json (defaults when absent).
inline PlotMeta plot_meta_from_summary(const std::filesystem::path& dir) {
  PlotMeta meta;
  std::ifstream in(dir / "summary.json");
  if (!in) return meta;
  const nlohmann::json s = nlohmann::json::parse(in, nullptr, false);
  if (s.is_discarded() || !s.contains("plot_meta")) return meta;
  const auto& m = s.at("plot_meta");
  meta.agents = m.value("agents", 1);
  meta.dim = m.value("dim", 1);
  meta.coordinate = m.value("coordinate", 0);
  return meta;
}

}  // namespace octnag::experiment
