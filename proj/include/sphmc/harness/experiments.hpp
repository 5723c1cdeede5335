#ifndef SPHMC_HARNESS_EXPERIMENTS_HPP
#define SPHMC_HARNESS_EXPERIMENTS_HPP

#include "sphmc/chain.hpp"
#include "sphmc/diagnostics.hpp"
#include "sphmc/eigen_cache.hpp"
#include "sphmc/errors.hpp"
#include "sphmc/gaussian.hpp"
#include "sphmc/harness/config.hpp"
#include "sphmc/harness/result.hpp"
#include "sphmc/kernels.hpp"
#include "sphmc/levelset.hpp"
#include "sphmc/random.hpp"
#include "sphmc/sphere.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace sphmc::harness {

/// The fixed 3x3 covariance of the marginal counterexample.
inline CovarianceModel counterexample_covariance() {
  Eigen::Matrix3d c;
  c << 1.25, 0.33, -1.62, 0.33, 0.42, -0.09, -1.62, -0.09, 2.85;
  return CovarianceModel::dense(c);
}

inline constexpr double kCounterexampleStep = 0.7;
inline constexpr int kKdeGridPoints = 200;

/// Grid of n equispaced points on [-1, 1].
inline std::vector<double> symmetric_unit_grid(int n = kKdeGridPoints) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (n - 1);
  return g;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::uint64_t kernel_stream(KernelId id) { return static_cast<std::uint64_t>(id) + 1; }

/// Runs task(i) for i in [0, n) on at most `jobs` threads. Each task writes
/// only its own slot; the first failure (by index) is rethrown after join.
template <class Task>
void parallel_for(std::size_t n, int jobs, const Task& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void write_trace(const std::vector<Eigen::VectorXd>& states, const std::filesystem::path& stem) {
  std::vector<unsigned char> bytes;
  const auto cols = states.empty() ? Eigen::Index{0} : states.front().size();
  bytes.reserve(states.size() * static_cast<std::size_t>(cols) * 8);
  for (const auto& s : states)
    for (Eigen::Index i = 0; i < s.size(); ++i) sphmc::detail::append_le(bytes, s[i]);
  auto bin = stem;
  bin += ".bin";
  std::ofstream out(bin, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing trace " + bin.string());
  nlohmann::json side;
  side["rows"] = states.size();
  side["cols"] = cols;
  side["layout"] = "row-major little-endian float64";
  side["checksum_fnv1a64"] = sphmc::detail::hex64(sphmc::detail::fnv1a64(bytes));
  auto js = stem;
  js += ".json";
  std::ofstream(js) << side.dump(2) << '\n';
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Marginal counterexample
// ---------------------------------------------------------------------------

/// Compares one naive-reprojection step and one reprojected-pCN step, both
/// started from ACG(C) with s = 0.7, against ACG(C) itself.
inline RunResult run_counterexample(std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 100'000) throw ConfigError({"counterexample needs n_samples >= 100000"});
  const auto t0 = std::chrono::steady_clock::now();
  const CovarianceModel cov = counterexample_covariance();
  const SpherePotential zero = [](const SphereVector&) { return 0.0; };
  const SphereKernel naive =
      make_sphere_kernel(KernelId::naive_repro, cov, zero, kCounterexampleStep, NegativeControl::allow);
  const SphereKernel repro = make_sphere_kernel(KernelId::repro_pcn, cov, zero, kCounterexampleStep);

  const auto n = static_cast<std::size_t>(n_samples);
  std::map<std::string, std::vector<std::vector<double>>> coords;
  for (const char* law : {"target", "naive", "reprojection"}) coords[law].assign(3, std::vector<double>(n));

  Rng rng_target = make_rng(seed, {0x636e74, 0});
  Rng rng_naive = make_rng(seed, {0x636e74, 1});
  Rng rng_repro = make_rng(seed, {0x636e74, 2});
  for (std::size_t k = 0; k < n; ++k) {
    const SphereVector t = acg_sample(cov, rng_target);
    SphereVector a = acg_sample(cov, rng_naive);
    a = naive.step(a, 0.0, rng_naive).next_state;
    SphereVector b = acg_sample(cov, rng_repro);
    b = repro.step(b, 0.0, rng_repro).next_state;
    for (int c = 0; c < 3; ++c) {
      coords["target"][c][k] = t[c];
      coords["naive"][c][k] = a[c];
      coords["reprojection"][c][k] = b[c];
    }
  }

  RunResult r;
  r.experiment = to_string(Experiment::counterexample);
  r.seeds = {seed};
  const std::vector<double> grid = symmetric_unit_grid();
  r.curves["grid"] = grid;
  for (const auto& [law, per_coord] : coords)
    for (int c = 0; c < 3; ++c)
      r.curves["kde/" + law + "/x" + std::to_string(c + 1)] = kde_marginal(per_coord[c], grid);
  const double threshold = ks_two_sample_threshold(static_cast<double>(n), static_cast<double>(n));
  r.scalars["ks_threshold"] = threshold;
  for (int c = 0; c < 3; ++c) {
    const std::string x = "x" + std::to_string(c + 1);
    r.scalars["ks_naive/" + x] = ks_two_sample(coords["naive"][c], coords["target"][c]);
    r.scalars["ks_reprojection/" + x] = ks_two_sample(coords["reprojection"][c], coords["target"][c]);
  }
  r.wall_clock_seconds = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------
// Non-Markovianity of projected chains
// ---------------------------------------------------------------------------

struct ConditionalEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Estimates P(x2 in H | x1 in H) and P(x2 in H | x1, x0 in H), H the upper
/// half-sphere, for the projection of an ambient chain in R^2 started from
/// N(0, I). A Markov projected chain would give equal values.
template <class AmbientStep>
std::pair<ConditionalEstimate, ConditionalEstimate> projected_conditionals(const AmbientStep& step,
                                                                           std::int64_t n, Rng& rng) {
  std::int64_t h1 = 0, h12 = 0, h01 = 0, h012 = 0;
  auto upper = [](const Eigen::VectorXd& x) { return project_to_sphere(x)[1] >= 0.0; };
  for (std::int64_t k = 0; k < n; ++k) {
    const Eigen::VectorXd x0 = standard_normal_vector(2, rng);
    const Eigen::VectorXd x1 = step(x0, rng);
    const Eigen::VectorXd x2 = step(x1, rng);
    const bool u0 = upper(x0), u1 = upper(x1), u2 = upper(x2);
    h1 += u1;
    h12 += u1 && u2;
    h01 += u0 && u1;
    h012 += u0 && u1 && u2;
  }
  auto ratio = [](std::int64_t hits, std::int64_t trials) {
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return ConditionalEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
  };
  return {ratio(h12, h1), ratio(h012, h01)};
}

/// Random-walk (s = 1) and pCN (s = 0.5) pairs of conditional probabilities
/// with binomial standard errors and the separation of each pair in units of
/// the combined standard error.
inline RunResult run_appendix_b(std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1'000'000) throw ConfigError({"appendix_b needs n_samples >= 1000000"});
  const auto t0 = std::chrono::steady_clock::now();
  const CovarianceModel identity = CovarianceModel::identity(2);

  auto random_walk = [](const Eigen::VectorXd& x, Rng& rng) -> Eigen::VectorXd {
    return x + 1.0 * standard_normal_vector(2, rng);
  };
  auto zero = [](const Eigen::VectorXd&) { return 0.0; };
  auto pcn = [&](const Eigen::VectorXd& x, Rng& rng) -> Eigen::VectorXd {
    return pcn_step_ambient(x, identity, 0.5, zero, rng, 0.0).next_state;
  };

  RunResult r;
  r.experiment = to_string(Experiment::appendix_b);
  r.seeds = {seed};
  auto record = [&](const std::string& name, const ConditionalEstimate& one, const ConditionalEstimate& two) {
    r.scalars[name + "/one_step"] = one.value;
    r.scalars[name + "/one_step_se"] = one.standard_error;
    r.scalars[name + "/two_step"] = two.value;
    r.scalars[name + "/two_step_se"] = two.standard_error;
    r.scalars[name + "/separation"] =
        std::abs(two.value - one.value) / std::hypot(one.standard_error, two.standard_error);
  };
  Rng rng_rw = make_rng(seed, {0x617070, 0});
  const auto [rw1, rw2] = projected_conditionals(random_walk, n_samples, rng_rw);
  record("random_walk", rw1, rw2);
  Rng rng_pcn = make_rng(seed, {0x617070, 1});
  const auto [p1, p2] = projected_conditionals(pcn, n_samples, rng_pcn);
  record("pcn", p1, p2);
  r.wall_clock_seconds = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------
// Level-set benchmark and dimension sweep
// ---------------------------------------------------------------------------

/// Builds the benchmark problem for dimension d with data generated from the
/// default truth and the configured data seed.
inline levelset::BenchmarkProblem make_benchmark_problem(std::shared_ptr<const KarhunenLoeveBasis> basis,
                                                         Eigen::Index d, std::uint64_t data_seed) {
  levelset::BenchmarkProblem p(std::move(basis), d);
  p.generate_synthetic_data(levelset::default_truth(), data_seed);
  return p;
}

struct TaskSpec {
  KernelId kernel;
  std::int64_t dimension;
  std::uint64_t seed;
};

/// One chain of the benchmark: tune (when automatic), burn in, run, summarise q.
inline TaskReport run_benchmark_task(const ExperimentConfig& cfg, const levelset::BenchmarkProblem& problem,
                                     const TaskSpec& spec, const std::filesystem::path& out_dir) {
  Rng rng = make_rng(spec.seed, {detail::kernel_stream(spec.kernel), static_cast<std::uint64_t>(spec.dimension)});
  const CovarianceModel& prior = problem.prior();
  const SpherePotential potential = [&problem](const SphereVector& x) { return problem.potential(x); };
  const auto negative = cfg.allow_negative_control ? NegativeControl::allow : NegativeControl::forbid;

  TaskReport report;
  report.kernel = std::string(to_string(spec.kernel));
  report.dimension = spec.dimension;
  report.seed = spec.seed;

  SphereVector start = acg_sample(prior, rng);
  double parameter = 0.0;
  if (is_metropolis(spec.kernel)) {
    if (cfg.tuning.automatic && !is_negative_control(spec.kernel)) {
      TuningOptions opts = default_tuning_options(spec.kernel);
      opts.target_rate = cfg.tuning.target_rate;
      const TuningResult tr = tune_step_size(spec.kernel, prior, potential, start, opts, rng);
      parameter = tr.parameter;
      report.tuning_rate = tr.measured_rate;
      report.tuning_converged = tr.converged;
      report.tuning_warning = tr.warning;
      start = *tr.final_state;
    } else {
      const auto it = cfg.tuning.fixed.find(report.kernel);
      parameter = it != cfg.tuning.fixed.end() ? it->second : kCounterexampleStep;
    }
  }
  report.tuning_parameter = parameter;
  const SphereKernel kernel = make_sphere_kernel(spec.kernel, prior, potential, parameter, negative);

  const std::vector<Functional> functionals = {
      {"q", [&problem](const SphereVector& x) { return problem.quantity_of_interest(x); }}};
  ChainOptions options{cfg.iterations, cfg.burn_in, cfg.store_traces ? cfg.thinning : 0};
  ChainTrace trace = run_chain(kernel, start, options, functionals, rng);
  trace.meta.seed = spec.seed;
  report.diagnostics = summarize(trace, "q");
  if (cfg.store_traces) {
    const std::string name = "trace_" + report.kernel + "_d" + std::to_string(spec.dimension) + "_s" +
                             std::to_string(spec.seed);
    detail::write_trace(trace.states, out_dir / name);
    report.trace_file = name + ".bin";
  }
  return report;
}

/// Runs every (kernel, dimension, seed) chain of a benchmark_d3 or
/// dimension_sweep config on at most `jobs` threads. Reports are sorted by
/// (kernel, dimension, seed).
inline RunResult run_benchmark(const ExperimentConfig& cfg, int jobs = 1,
                               const std::filesystem::path& out_dir = {}) {
  if (cfg.experiment != Experiment::benchmark_d3 && cfg.experiment != Experiment::dimension_sweep)
    throw ConfigError({"run_benchmark needs a benchmark_d3 or dimension_sweep config"});
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.store_traces) std::filesystem::create_directories(out_dir);

  const auto basis = std::make_shared<const KarhunenLoeveBasis>(
      load_or_build_basis(cfg.eigen_cache, cfg.delta_t, cfg.build_cache));
  std::map<std::int64_t, std::unique_ptr<levelset::BenchmarkProblem>> problems;
  for (auto d : cfg.dimensions)
    problems[d] = std::make_unique<levelset::BenchmarkProblem>(make_benchmark_problem(basis, d, cfg.data_seed));

  std::vector<TaskSpec> tasks;
  for (auto id : cfg.kernels)
    for (auto d : cfg.dimensions)
      for (auto s : cfg.seeds) tasks.push_back({id, d, s});

  RunResult r;
  r.config = to_json(cfg);
  r.experiment = to_string(cfg.experiment);
  r.reports.resize(tasks.size());
  detail::parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    r.reports[i] = run_benchmark_task(cfg, *problems.at(tasks[i].dimension), tasks[i], out_dir);
  });
  std::sort(r.reports.begin(), r.reports.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });

  r.seeds = cfg.seeds;
  r.seeds.push_back(cfg.data_seed);

  const auto& first = *problems.begin()->second;
  for (Eigen::Index j = 0; j < 4; ++j) {
    const std::string t = "t" + std::to_string(j + 1);
    r.scalars["data/" + t] = first.data()[j];
    r.scalars["true_observation/" + t] = first.true_observations()[j];
  }
  const auto truth = first.synthesize_level_set(levelset::default_truth());
  const Eigen::VectorXd p = levelset::solve_darcy_1d(truth.u_values, first.delta_t());
  auto as_vector = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  r.curves["truth/grid"] = as_vector(first.basis().grid);
  r.curves["truth/g"] = as_vector(truth.g_values);
  r.curves["truth/u"] = as_vector(truth.u_values);
  r.curves["truth/p"] = as_vector(p);
  r.scalars["truth/q"] = levelset::effective_permeability(truth.u_values, first.delta_t());

  if (cfg.dimensions.size() > 1) {
    const auto d_lo = *std::min_element(cfg.dimensions.begin(), cfg.dimensions.end());
    const auto d_hi = *std::max_element(cfg.dimensions.begin(), cfg.dimensions.end());
    for (auto id : cfg.kernels) {
      const std::string k(to_string(id));
      for (auto s : cfg.seeds) {
        double iact_lo = 0.0, iact_hi = 0.0, rmsjd_lo = 0.0, rmsjd_hi = 0.0;
        double iact_min = INFINITY, iact_max = 0.0;
        for (auto d : cfg.dimensions) {
          const TaskReport* t = find_report(r, k, d, s);
          iact_min = std::min(iact_min, t->diagnostics.iact);
          iact_max = std::max(iact_max, t->diagnostics.iact);
          if (d == d_lo) iact_lo = t->diagnostics.iact, rmsjd_lo = t->diagnostics.rmsjd;
          if (d == d_hi) iact_hi = t->diagnostics.iact, rmsjd_hi = t->diagnostics.rmsjd;
        }
        const std::string suffix = "/" + k + "/seed" + std::to_string(s);
        r.scalars["iact_max_over_min" + suffix] = iact_max / iact_min;
        r.scalars["iact_growth" + suffix] = iact_hi / iact_lo;
        r.scalars["rmsjd_growth" + suffix] = rmsjd_hi / rmsjd_lo;
      }
    }
  }
  r.wall_clock_seconds = detail::seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------
// Stationarity and reversibility suite
// ---------------------------------------------------------------------------

/// Potential on S^1 used by the reversibility check; its range is [-1, 1].
inline double circle_potential(const SphereVector& x) { return x[0] * x[1] + 0.5 * x[0]; }

inline constexpr int kCircleBins = 72;

inline int circle_bin(const SphereVector& x) {
  const double angle = std::atan2(x[1], x[0]) + std::numbers::pi;
  return std::min(kCircleBins - 1, static_cast<int>(angle / (2.0 * std::numbers::pi) * kCircleBins));
}

/// Exact draw from exp(-circle_potential) d ACG(C) by rejection from ACG(C).
inline SphereVector circle_target_sample(const CovarianceModel& cov, Rng& rng) {
  for (;;) {
    SphereVector x = acg_sample(cov, rng);
    if (uniform01(rng) < std::exp(-(circle_potential(x) + 1.0))) return x;
  }
}

struct DetailedBalanceCheck {
  double max_z = 0.0;         // max |N_ij - N_ji| / sqrt(N_ij + N_ji)
  double chi2_per_dof = 0.0;  // mean of z^2
  int pairs_used = 0;
};

inline constexpr std::int64_t kMinPairCount = 20;

/// Bins (x, K(x, .)) with x drawn from the target and compares the joint
/// counts N_ij and N_ji for every bin pair with at least kMinPairCount
/// transitions. Under reversibility each z is approximately standard normal.
inline DetailedBalanceCheck detailed_balance_check(const SphereKernel& kernel, const CovarianceModel& cov,
                                                   std::int64_t pairs, Rng& rng) {
  std::vector<std::int64_t> counts(kCircleBins * kCircleBins, 0);
  for (std::int64_t k = 0; k < pairs; ++k) {
    const SphereVector x = circle_target_sample(cov, rng);
    const SphereVector y = kernel.step(x, kernel.value(x), rng).next_state;
    ++counts[static_cast<std::size_t>(circle_bin(x) * kCircleBins + circle_bin(y))];
  }
  DetailedBalanceCheck out;
  double chi2 = 0.0;
  for (int i = 0; i < kCircleBins; ++i)
    for (int j = i + 1; j < kCircleBins; ++j) {
      const auto a = counts[static_cast<std::size_t>(i * kCircleBins + j)];
      const auto b = counts[static_cast<std::size_t>(j * kCircleBins + i)];
      if (a + b < kMinPairCount) continue;
      const double z = std::abs(static_cast<double>(a - b)) / std::sqrt(static_cast<double>(a + b));
      out.max_z = std::max(out.max_z, z);
      chi2 += z * z;
      ++out.pairs_used;
    }
  out.chi2_per_dof = out.pairs_used > 0 ? chi2 / out.pairs_used : 0.0;
  return out;
}

/// Stationarity of repro_pcn and repro_ess under a constant potential, checked
/// per coordinate against direct ACG(C) samples with the chain's sample size
/// deflated by its IACT, plus the S^1 detailed-balance check for repro_pcn and
/// repro_ess against circle_potential.
inline RunResult run_stationarity_suite(std::int64_t n_steps, std::uint64_t seed) {
  if (n_steps < 1000) throw ConfigError({"stationarity_suite needs n_samples >= 1000"});
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.experiment = to_string(Experiment::stationarity_suite);
  r.seeds = {seed};

  const CovarianceModel cov = counterexample_covariance();
  const SpherePotential zero = [](const SphereVector&) { return 0.0; };
  Rng direct_rng = make_rng(seed, {0x737461, 0});
  std::vector<std::vector<double>> direct(3, std::vector<double>(static_cast<std::size_t>(n_steps)));
  for (std::int64_t k = 0; k < n_steps; ++k) {
    const SphereVector x = acg_sample(cov, direct_rng);
    for (int c = 0; c < 3; ++c) direct[c][static_cast<std::size_t>(k)] = x[c];
  }
  for (auto id : {KernelId::repro_pcn, KernelId::repro_ess}) {
    const std::string k(to_string(id));
    Rng rng = make_rng(seed, {0x737461, detail::kernel_stream(id)});
    const SphereKernel kernel = make_sphere_kernel(id, cov, zero, 0.5);
    std::vector<Functional> coords;
    for (int c = 0; c < 3; ++c) coords.push_back({"x" + std::to_string(c + 1), [c](const SphereVector& x) { return x[c]; }});
    const SphereVector x0 = acg_sample(cov, rng);
    const ChainTrace trace = run_chain(kernel, x0, {n_steps + 1, 1, 0}, coords, rng);
    for (int c = 0; c < 3; ++c) {
      const std::string x = "x" + std::to_string(c + 1);
      const auto& series = trace.functional_series.at(x);
      const double tau = iact(series);
      const double n_eff = static_cast<double>(series.size()) / tau;
      r.scalars["ks/" + k + "/" + x] = ks_two_sample(series, direct[c]);
      r.scalars["ks_threshold/" + k + "/" + x] = ks_two_sample_threshold(n_eff, static_cast<double>(n_steps));
      r.scalars["iact/" + k + "/" + x] = tau;
    }
    r.scalars["acceptance/" + k] = trace.acceptance_rate();
  }

  Eigen::Vector2d diag(2.0, 0.5);
  const CovarianceModel circle_cov = CovarianceModel::spectral(diag);
  const SpherePotential phi = [](const SphereVector& x) { return circle_potential(x); };
  for (auto id : {KernelId::repro_pcn, KernelId::repro_ess}) {
    const std::string k(to_string(id));
    Rng rng = make_rng(seed, {0x646262, detail::kernel_stream(id)});
    const SphereKernel kernel = make_sphere_kernel(id, circle_cov, phi, 0.5);
    const DetailedBalanceCheck db = detailed_balance_check(kernel, circle_cov, 10 * n_steps, rng);
    r.scalars["detailed_balance_max_z/" + k] = db.max_z;
    r.scalars["detailed_balance_chi2_per_dof/" + k] = db.chi2_per_dof;
    r.scalars["detailed_balance_pairs/" + k] = db.pairs_used;
  }
  r.wall_clock_seconds = detail::seconds_since(t0);
  return r;
}

/// Dispatches on cfg.experiment. The first configured seed drives the
/// single-seed experiments.
inline RunResult run_experiment(const ExperimentConfig& cfg, int jobs = 1) {
  RunResult r;
  switch (cfg.experiment) {
    case Experiment::counterexample: r = run_counterexample(cfg.n_samples, cfg.seeds.front()); break;
    case Experiment::appendix_b: r = run_appendix_b(cfg.n_samples, cfg.seeds.front()); break;
    case Experiment::stationarity_suite: r = run_stationarity_suite(cfg.n_samples, cfg.seeds.front()); break;
    case Experiment::benchmark_d3:
    case Experiment::dimension_sweep: return run_benchmark(cfg, jobs, cfg.output_dir);
  }
  r.config = to_json(cfg);
  return r;
}

}  // namespace sphmc::harness

#endif  // SPHMC_HARNESS_EXPERIMENTS_HPP
