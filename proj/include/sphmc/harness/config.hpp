#ifndef SPHMC_HARNESS_CONFIG_HPP
#define SPHMC_HARNESS_CONFIG_HPP

#include "sphmc/errors.hpp"
#include "sphmc/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace sphmc::harness {

enum class Experiment { counterexample, appendix_b, benchmark_d3, dimension_sweep, stationarity_suite };

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::counterexample: return "counterexample";
    case Experiment::appendix_b: return "appendix_b";
    case Experiment::benchmark_d3: return "benchmark_d3";
    case Experiment::dimension_sweep: return "dimension_sweep";
    case Experiment::stationarity_suite: return "stationarity_suite";
  }
  return "unknown";
}

inline std::optional<Experiment> parse_experiment(const std::string& s) {
  for (auto e : {Experiment::counterexample, Experiment::appendix_b, Experiment::benchmark_d3,
                 Experiment::dimension_sweep, Experiment::stationarity_suite})
    if (to_string(e) == s) return e;
  return std::nullopt;
}

/// Either "auto-<rate>%" bisection tuning or fixed per-kernel parameters.
struct TuningSpec {
  bool automatic = true;
  double target_rate = 0.23;
  std::map<std::string, double> fixed;
};

/// Declarative description of one experiment. `iterations` counts every
/// chain step, burn-in included, so the recorded length is iterations - burn_in.
struct ExperimentConfig {
  Experiment experiment = Experiment::benchmark_d3;
  std::vector<std::int64_t> dimensions;
  std::vector<KernelId> kernels;
  std::int64_t iterations = 0;
  std::int64_t burn_in = 50'000;
  std::int64_t thinning = 100;
  std::vector<std::uint64_t> seeds;
  TuningSpec tuning;
  std::string output_dir = "results";
  std::int64_t n_samples = 0;
  std::uint64_t data_seed = 1;
  double delta_t = 1e-3;
  std::string eigen_cache = "cache/whittle_matern";
  bool build_cache = true;
  bool store_traces = false;
  bool allow_negative_control = false;
};

inline constexpr std::int64_t kDefaultBurnIn = 50'000;
inline constexpr std::int64_t kDefaultThinning = 100;

namespace detail {

inline std::string valid_kernel_list() {
  std::string out;
  for (auto id : kAllKernelIds) {
    if (!out.empty()) out += ", ";
    out += std::string(sphmc::to_string(id));
  }
  return out;
}

inline std::vector<KernelId> default_kernels(Experiment e) {
  switch (e) {
    case Experiment::benchmark_d3:
      return {KernelId::repro_pcn, KernelId::repro_ess, KernelId::geodesic_mh, KernelId::tangent_mh};
    case Experiment::dimension_sweep:
      return {KernelId::repro_pcn, KernelId::repro_ess, KernelId::geodesic_mh, KernelId::tangent_mh};
    case Experiment::counterexample: return {KernelId::repro_pcn, KernelId::naive_repro};
    case Experiment::appendix_b: return {KernelId::projected_wrapper};
    case Experiment::stationarity_suite: return {KernelId::repro_pcn, KernelId::repro_ess};
  }
  return {};
}

}  // namespace detail

/// Parses and validates a configuration document, applying defaults.
/// Every violation is collected and reported together in a ConfigError.
inline ExperimentConfig parse_config(const nlohmann::json& doc) {
  std::vector<std::string> errors;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});

  static const std::vector<std::string> known = {
      "experiment", "dimensions", "kernels",    "iterations", "burn_in",     "thinning",    "seeds",
      "tuning",     "output_dir", "n_samples",  "data_seed",  "delta_t",     "eigen_cache", "build_cache",
      "store_traces", "allow_negative_control"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) errors.push_back("unknown key '" + key + "'");

  auto read = [&](const char* key, auto& target) {
    if (!doc.contains(key)) return false;
    try {
      doc.at(key).get_to(target);
      return true;
    } catch (const nlohmann::json::exception&) {
      errors.push_back(std::string("'") + key + "' has the wrong type");
      return false;
    }
  };

  std::string experiment;
  if (!read("experiment", experiment)) {
    if (!doc.contains("experiment")) errors.push_back("missing 'experiment'");
  } else if (auto e = parse_experiment(experiment)) {
    cfg.experiment = *e;
  } else {
    errors.push_back("unknown experiment '" + experiment +
                     "' (valid: counterexample, appendix_b, benchmark_d3, dimension_sweep, stationarity_suite)");
  }

  const bool chain_experiment =
      cfg.experiment == Experiment::benchmark_d3 || cfg.experiment == Experiment::dimension_sweep;

  if (!read("dimensions", cfg.dimensions)) {
    if (cfg.experiment == Experiment::benchmark_d3) cfg.dimensions = {3};
    if (cfg.experiment == Experiment::dimension_sweep) cfg.dimensions = {10, 40, 160};
    if (cfg.experiment == Experiment::counterexample) cfg.dimensions = {3};
    if (cfg.experiment == Experiment::appendix_b) cfg.dimensions = {2};
    if (cfg.experiment == Experiment::stationarity_suite) cfg.dimensions = {3};
  }
  for (auto d : cfg.dimensions)
    if (d < 2) errors.push_back("dimension " + std::to_string(d) + " is below 2");
  if (cfg.dimensions.empty()) errors.push_back("at least one dimension is required");

  std::vector<std::string> kernel_names;
  if (read("kernels", kernel_names)) {
    for (const auto& name : kernel_names) {
      if (auto id = parse_kernel_id(name)) {
        cfg.kernels.push_back(*id);
      } else {
        errors.push_back("unknown kernel '" + name + "' (valid: " + detail::valid_kernel_list() + ")");
      }
    }
    if (kernel_names.empty()) errors.push_back("kernel list is empty");
  } else {
    cfg.kernels = detail::default_kernels(cfg.experiment);
  }
  read("allow_negative_control", cfg.allow_negative_control);
  if (chain_experiment) {
    for (auto id : cfg.kernels) {
      if (id == KernelId::pcn_ambient || id == KernelId::ess_ambient || id == KernelId::projected_wrapper)
        errors.push_back("kernel '" + std::string(sphmc::to_string(id)) + "' cannot run on the sphere benchmark");
      else if (is_negative_control(id) && !cfg.allow_negative_control)
        errors.push_back("kernel '" + std::string(sphmc::to_string(id)) +
                         "' is a negative control; set allow_negative_control to use it");
    }
  }

  const bool has_iterations = read("iterations", cfg.iterations);
  if (!read("burn_in", cfg.burn_in)) cfg.burn_in = kDefaultBurnIn;
  if (!read("thinning", cfg.thinning)) cfg.thinning = kDefaultThinning;
  if (!has_iterations) {
    if (cfg.experiment == Experiment::dimension_sweep) cfg.iterations = cfg.burn_in + 200'000;
    else if (cfg.experiment == Experiment::benchmark_d3) cfg.iterations = cfg.burn_in + 200'000;
    else cfg.iterations = cfg.burn_in + 100'000;
  }
  if (cfg.burn_in < 0) errors.push_back("burn_in must be non-negative");
  if (cfg.iterations <= cfg.burn_in) errors.push_back("iterations must exceed burn_in");
  if (cfg.thinning < 1) errors.push_back("thinning must be at least 1");

  if (read("seeds", cfg.seeds)) {
    if (cfg.seeds.empty()) errors.push_back("seeds must contain at least one seed");
  } else {
    cfg.seeds = {1};
  }

  if (doc.contains("tuning")) {
    const auto& t = doc.at("tuning");
    if (t.is_string()) {
      static const std::regex pattern(R"(auto-([0-9]+(\.[0-9]+)?)%)");
      std::smatch m;
      const std::string s = t.get<std::string>();
      if (std::regex_match(s, m, pattern)) {
        cfg.tuning.automatic = true;
        cfg.tuning.target_rate = std::stod(m[1].str()) / 100.0;
        if (!(cfg.tuning.target_rate > 0.0 && cfg.tuning.target_rate < 1.0))
          errors.push_back("tuning target must lie strictly between 0% and 100%");
      } else {
        errors.push_back("tuning must be \"auto-<rate>%\" or an object of per-kernel parameters");
      }
    } else if (t.is_object()) {
      cfg.tuning.automatic = false;
      for (const auto& [name, value] : t.items()) {
        if (!parse_kernel_id(name)) {
          errors.push_back("tuning names unknown kernel '" + name + "' (valid: " + detail::valid_kernel_list() + ")");
        } else if (!value.is_number() || !(value.get<double>() > 0.0)) {
          errors.push_back("tuning for '" + name + "' must be a positive number");
        } else {
          cfg.tuning.fixed[name] = value.get<double>();
        }
      }
      for (auto id : cfg.kernels)
        if (is_metropolis(id) && !cfg.tuning.fixed.contains(std::string(sphmc::to_string(id))))
          errors.push_back("fixed tuning is missing a parameter for '" + std::string(sphmc::to_string(id)) + "'");
    } else {
      errors.push_back("tuning must be a string or an object");
    }
  }

  read("output_dir", cfg.output_dir);
  if (!read("n_samples", cfg.n_samples)) {
    if (cfg.experiment == Experiment::counterexample) cfg.n_samples = 1'000'000;
    if (cfg.experiment == Experiment::appendix_b) cfg.n_samples = 10'000'000;
    if (cfg.experiment == Experiment::stationarity_suite) cfg.n_samples = 100'000;
  }
  if (cfg.experiment == Experiment::counterexample && cfg.n_samples < 100'000)
    errors.push_back("counterexample needs n_samples >= 100000");
  if (cfg.experiment == Experiment::appendix_b && cfg.n_samples < 1'000'000)
    errors.push_back("appendix_b needs n_samples >= 1000000");
  if (cfg.experiment == Experiment::stationarity_suite && cfg.n_samples < 1000)
    errors.push_back("stationarity_suite needs n_samples >= 1000");

  read("data_seed", cfg.data_seed);
  if (read("delta_t", cfg.delta_t) && !(cfg.delta_t > 0.0 && cfg.delta_t <= 0.5))
    errors.push_back("delta_t must lie in (0, 0.5]");
  read("eigen_cache", cfg.eigen_cache);
  read("build_cache", cfg.build_cache);
  read("store_traces", cfg.store_traces);

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

/// Canonical JSON form; parse_config(to_json(c)) reproduces c.
inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = to_string(cfg.experiment);
  j["dimensions"] = cfg.dimensions;
  std::vector<std::string> names;
  for (auto id : cfg.kernels) names.emplace_back(sphmc::to_string(id));
  j["kernels"] = names;
  j["iterations"] = cfg.iterations;
  j["burn_in"] = cfg.burn_in;
  j["thinning"] = cfg.thinning;
  j["seeds"] = cfg.seeds;
  if (cfg.tuning.automatic) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "auto-%g%%", cfg.tuning.target_rate * 100.0);
    j["tuning"] = buf;
  } else {
    j["tuning"] = cfg.tuning.fixed;
  }
  j["output_dir"] = cfg.output_dir;
  j["n_samples"] = cfg.n_samples;
  j["data_seed"] = cfg.data_seed;
  j["delta_t"] = cfg.delta_t;
  j["eigen_cache"] = cfg.eigen_cache;
  j["build_cache"] = cfg.build_cache;
  j["store_traces"] = cfg.store_traces;
  j["allow_negative_control"] = cfg.allow_negative_control;
  return j;
}

/// Reads and validates a configuration file.
inline ExperimentConfig validate_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return parse_config(doc);
}

}  // namespace sphmc::harness

#endif  // SPHMC_HARNESS_CONFIG_HPP
