// Command-line driver for the sphere MCMC experiments.
//
//   sphmc counterexample [--seed N] [--out DIR]
//   sphmc appendix-b     [--seed N] [--out DIR]
//   sphmc benchmark      [--config PATH] [--seed N]... [--jobs N] [--out DIR]
//   sphmc sweep          [--config PATH] [--seed N]... [--jobs N] [--out DIR] [--full-scale]
//   sphmc validate       --config PATH
//   sphmc emit-plots     [--result PATH] [--out DIR]
//
// Exit status: 0 success, 1 configuration error, 2 runtime failure.

#include "sphmc/harness/config.hpp"
#include "sphmc/harness/experiments.hpp"
#include "sphmc/harness/plots.hpp"
#include "sphmc/harness/result.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace sphmc::harness;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
  std::string out;
  bool full_scale = false;
  std::int64_t samples = 0;
  std::string result;
};

ExperimentConfig load(const CommonOptions& o, Experiment fallback) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = validate_config(o.config);
    if (cfg.experiment != fallback)
      throw sphmc::ConfigError({"config describes experiment '" + to_string(cfg.experiment) +
                                "' but the subcommand runs '" + to_string(fallback) + "'"});
  } else {
    cfg = parse_config(nlohmann::json{{"experiment", to_string(fallback)}});
  }
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.samples > 0) cfg.n_samples = o.samples;
  if (o.full_scale) {
    if (fallback != Experiment::dimension_sweep) throw sphmc::ConfigError({"--full-scale only applies to sweep"});
    cfg.dimensions = {10, 20, 40, 80, 160, 320, 640};
    cfg.iterations = cfg.burn_in + 1'000'000;
    std::cerr << "warning: full-scale sweep up to d = 640 with 1e6 iterations per chain; expect many CPU hours\n";
  }
  // Re-validate the merged document so overrides obey the same rules.
  return parse_config(to_json(cfg));
}

void print_summary(const RunResult& r) {
  for (const auto& t : r.reports) {
    std::printf("%-12s d=%-4lld seed=%-4llu tune=%-9.4g acc=%.3f q=%.4f +- %.4f iact=%.2f rmsjd=%.4f", t.kernel.c_str(),
                static_cast<long long>(t.dimension), static_cast<unsigned long long>(t.seed), t.tuning_parameter,
                t.diagnostics.acceptance_rate, t.diagnostics.mean, t.diagnostics.half_ci, t.diagnostics.iact,
                t.diagnostics.rmsjd);
    if (t.diagnostics.mean_shrink_tries) std::printf(" tries=%.3f", *t.diagnostics.mean_shrink_tries);
    if (!t.tuning_warning.empty()) std::printf(" [%s]", t.tuning_warning.c_str());
    std::printf("\n");
  }
  for (const auto& [name, v] : r.scalars)
    if (name.rfind("truth/", 0) != 0) std::printf("%s = %.6g\n", name.c_str(), v);
  std::printf("wall clock: %.1f s\n", r.wall_clock_seconds);
}

int run_and_write(const CommonOptions& o, Experiment e) {
  const ExperimentConfig cfg = load(o, e);
  const RunResult r = run_experiment(cfg, o.jobs);
  write_result(r, cfg.output_dir);
  emit_plot_data(r, cfg.output_dir);
  print_summary(r);
  std::printf("results written to %s\n", cfg.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reprojection MCMC on the sphere: experiments and diagnostics"};
  app.require_subcommand(1);
  CommonOptions opts;

  auto add_run_flags = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", opts.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seeds, "chain seed; repeat for several")->take_all();
    sub->add_option("--out", opts.out, "output directory");
    if (with_jobs) sub->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* counter = app.add_subcommand("counterexample", "one-step marginals: naive vs reprojected pCN");
  add_run_flags(counter, false);
  counter->add_option("--samples", opts.samples, "number of draws per law");
  auto* appb = app.add_subcommand("appendix-b", "non-Markovianity probabilities of projected chains");
  add_run_flags(appb, false);
  appb->add_option("--samples", opts.samples, "Monte Carlo sample size");
  auto* bench = app.add_subcommand("benchmark", "level-set benchmark at d = 3");
  add_run_flags(bench, true);
  auto* sweep = app.add_subcommand("sweep", "IACT and RMSJD across dimensions");
  add_run_flags(sweep, true);
  sweep->add_flag("--full-scale", opts.full_scale, "d up to 640 and 1e6 iterations");
  auto* stat = app.add_subcommand("stationarity", "stationarity and detailed-balance checks");
  add_run_flags(stat, false);
  stat->add_option("--samples", opts.samples, "chain length");
  auto* validate = app.add_subcommand("validate", "check a config file and print it with defaults");
  validate->add_option("--config", opts.config, "experiment config (JSON)")->required();
  auto* plots = app.add_subcommand("emit-plots", "write CSV plot data from a stored result");
  plots->add_option("--result", opts.result, "result.json (default: <out>/result.json)");
  plots->add_option("--out", opts.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*counter) return run_and_write(opts, Experiment::counterexample);
    if (*appb) return run_and_write(opts, Experiment::appendix_b);
    if (*bench) return run_and_write(opts, Experiment::benchmark_d3);
    if (*sweep) return run_and_write(opts, Experiment::dimension_sweep);
    if (*stat) return run_and_write(opts, Experiment::stationarity_suite);
    if (*validate) {
      const ExperimentConfig cfg = validate_config(opts.config);
      std::cout << to_json(cfg).dump(2) << '\n';
      return 0;
    }
    if (*plots) {
      const std::string file = opts.result.empty() ? (std::filesystem::path(opts.out) / "result.json").string()
                                                   : opts.result;
      for (const auto& p : emit_plot_data(read_result(file), opts.out)) std::cout << p.string() << '\n';
      return 0;
    }
  } catch (const sphmc::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& msg : e.errors()) std::cerr << "  - " << msg << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
