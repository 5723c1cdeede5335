#ifndef SPHMC_HARNESS_PLOTS_HPP
#define SPHMC_HARNESS_PLOTS_HPP

#include "sphmc/harness/result.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace sphmc::harness {

namespace detail {

/// Shortest round-trip decimal form; independent of the global locale.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << header << '\n';
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace detail

/// Writes tidy CSV files for external plotting and returns their paths:
///   metrics.csv  experiment,kernel,dimension,seed,metric,value (one row per report metric)
///   scalars.csv  experiment,name,value
///   kde.csv      experiment,coordinate,law,x,density (counterexample only)
///   truth.csv    t,g,u,p (benchmark and sweep only)
/// Output depends only on the result, so re-emission is byte-identical.
inline std::vector<std::filesystem::path> emit_plot_data(const RunResult& result, const std::filesystem::path& out_dir) {
  using detail::format_number;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) throw std::runtime_error("cannot create " + out_dir.string());
  std::vector<std::filesystem::path> written;

  {
    const auto path = out_dir / "metrics.csv";
    detail::CsvFile csv(path, "experiment,kernel,dimension,seed,metric,value");
    for (const auto& t : result.reports) {
      auto emit = [&](const char* metric, double v) {
        csv.row({result.experiment, t.kernel, std::to_string(t.dimension), std::to_string(t.seed), metric,
                 format_number(v)});
      };
      emit("iact", t.diagnostics.iact);
      emit("rmsjd", t.diagnostics.rmsjd);
      emit("acceptance_rate", t.diagnostics.acceptance_rate);
      emit("mean_q", t.diagnostics.mean);
      emit("half_ci_q", t.diagnostics.half_ci);
      emit("tuning_parameter", t.tuning_parameter);
      if (t.diagnostics.mean_shrink_tries) emit("mean_shrink_tries", *t.diagnostics.mean_shrink_tries);
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "scalars.csv";
    detail::CsvFile csv(path, "experiment,name,value");
    for (const auto& [name, v] : result.scalars) csv.row({result.experiment, name, format_number(v)});
    written.push_back(path);
  }
  if (const auto grid = result.curves.find("grid"); grid != result.curves.end()) {
    const auto path = out_dir / "kde.csv";
    detail::CsvFile csv(path, "experiment,coordinate,law,x,density");
    for (const char* coord : {"x1", "x2", "x3"})
      for (const char* law : {"target", "naive", "reprojection"}) {
        const auto it = result.curves.find(std::string("kde/") + law + "/" + coord);
        if (it == result.curves.end()) continue;
        for (std::size_t i = 0; i < grid->second.size(); ++i)
          csv.row({result.experiment, coord, law, format_number(grid->second[i]), format_number(it->second[i])});
      }
    written.push_back(path);
  }
  if (const auto t = result.curves.find("truth/grid"); t != result.curves.end()) {
    const auto path = out_dir / "truth.csv";
    detail::CsvFile csv(path, "t,g,u,p");
    const auto& g = result.curves.at("truth/g");
    const auto& u = result.curves.at("truth/u");
    const auto& p = result.curves.at("truth/p");
    for (std::size_t i = 0; i < t->second.size(); ++i)
      csv.row({format_number(t->second[i]), format_number(g[i]), format_number(u[i]), format_number(p[i])});
    written.push_back(path);
  }
  return written;
}

}  // namespace sphmc::harness

#endif  // SPHMC_HARNESS_PLOTS_HPP
