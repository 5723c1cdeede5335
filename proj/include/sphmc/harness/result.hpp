#ifndef SPHMC_HARNESS_RESULT_HPP
#define SPHMC_HARNESS_RESULT_HPP

#include "sphmc/diagnostics.hpp"
#include "sphmc/errors.hpp"
#include "sphmc/harness/config.hpp"
#include "sphmc/version.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace sphmc::harness {

/// Diagnostics of one (kernel, dimension, seed) chain.
struct TaskReport {
  std::string kernel;
  std::int64_t dimension = 0;
  std::uint64_t seed = 0;
  double tuning_parameter = 0.0;
  double tuning_rate = 0.0;
  bool tuning_converged = true;
  std::string tuning_warning;
  DiagnosticsReport diagnostics;
  std::optional<std::string> trace_file;

  auto key() const { return std::tie(kernel, dimension, seed); }
};

/// Persisted outcome of one experiment. Everything except wall_clock_seconds
/// is a deterministic function of the config.
struct RunResult {
  nlohmann::json config;
  std::string experiment;
  std::vector<TaskReport> reports;
  std::map<std::string, std::vector<double>> curves;
  std::map<std::string, double> scalars;
  std::vector<std::uint64_t> seeds;
  std::string library_version = kVersion;
  double wall_clock_seconds = 0.0;
};

inline nlohmann::json to_json(const TaskReport& r) {
  nlohmann::json j;
  j["kernel"] = r.kernel;
  j["dimension"] = r.dimension;
  j["seed"] = r.seed;
  j["tuning_parameter"] = r.tuning_parameter;
  j["tuning_rate"] = r.tuning_rate;
  j["tuning_converged"] = r.tuning_converged;
  j["tuning_warning"] = r.tuning_warning;
  j["iact"] = r.diagnostics.iact;
  j["rmsjd"] = r.diagnostics.rmsjd;
  j["acceptance_rate"] = r.diagnostics.acceptance_rate;
  j["mean"] = r.diagnostics.mean;
  j["half_ci"] = r.diagnostics.half_ci;
  j["mean_shrink_tries"] = r.diagnostics.mean_shrink_tries ? nlohmann::json(*r.diagnostics.mean_shrink_tries)
                                                           : nlohmann::json(nullptr);
  j["trace_file"] = r.trace_file ? nlohmann::json(*r.trace_file) : nlohmann::json(nullptr);
  return j;
}

inline TaskReport task_report_from_json(const nlohmann::json& j) {
  TaskReport r;
  j.at("kernel").get_to(r.kernel);
  j.at("dimension").get_to(r.dimension);
  j.at("seed").get_to(r.seed);
  j.at("tuning_parameter").get_to(r.tuning_parameter);
  j.at("tuning_rate").get_to(r.tuning_rate);
  j.at("tuning_converged").get_to(r.tuning_converged);
  j.at("tuning_warning").get_to(r.tuning_warning);
  j.at("iact").get_to(r.diagnostics.iact);
  j.at("rmsjd").get_to(r.diagnostics.rmsjd);
  j.at("acceptance_rate").get_to(r.diagnostics.acceptance_rate);
  j.at("mean").get_to(r.diagnostics.mean);
  j.at("half_ci").get_to(r.diagnostics.half_ci);
  if (!j.at("mean_shrink_tries").is_null()) r.diagnostics.mean_shrink_tries = j.at("mean_shrink_tries").get<double>();
  if (!j.at("trace_file").is_null()) r.trace_file = j.at("trace_file").get<std::string>();
  return r;
}

/// JSON form with sorted keys. With include_wall_clock = false the dump is
/// byte-identical across reruns of the same config.
inline nlohmann::json to_json(const RunResult& r, bool include_wall_clock = true) {
  nlohmann::json j;
  j["config"] = r.config;
  j["experiment"] = r.experiment;
  j["reports"] = nlohmann::json::array();
  for (const auto& t : r.reports) j["reports"].push_back(to_json(t));
  j["curves"] = r.curves;
  j["scalars"] = r.scalars;
  j["seeds"] = r.seeds;
  j["library_version"] = r.library_version;
  if (include_wall_clock) j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

inline RunResult run_result_from_json(const nlohmann::json& j) {
  RunResult r;
  r.config = j.at("config");
  j.at("experiment").get_to(r.experiment);
  for (const auto& t : j.at("reports")) r.reports.push_back(task_report_from_json(t));
  j.at("curves").get_to(r.curves);
  j.at("scalars").get_to(r.scalars);
  j.at("seeds").get_to(r.seeds);
  j.at("library_version").get_to(r.library_version);
  if (j.contains("wall_clock_seconds")) j.at("wall_clock_seconds").get_to(r.wall_clock_seconds);
  return r;
}

/// Report for (kernel, dimension, seed), or nullptr.
inline const TaskReport* find_report(const RunResult& r, const std::string& kernel, std::int64_t d,
                                     std::uint64_t seed) {
  for (const auto& t : r.reports)
    if (t.kernel == kernel && t.dimension == d && t.seed == seed) return &t;
  return nullptr;
}

inline std::filesystem::path result_path(const std::filesystem::path& out_dir) { return out_dir / "result.json"; }

inline void write_result(const RunResult& r, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream out(result_path(out_dir), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write to output directory '" + out_dir.string() + "'");
  out << to_json(r).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + result_path(out_dir).string());
}

inline RunResult read_result(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open result file '" + file.string() + "'");
  return run_result_from_json(nlohmann::json::parse(in));
}

}  // namespace sphmc::harness

#endif  // SPHMC_HARNESS_RESULT_HPP
