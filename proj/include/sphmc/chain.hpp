#ifndef SPHMC_CHAIN_HPP
#define SPHMC_CHAIN_HPP

#include "sphmc/errors.hpp"
#include "sphmc/kernels.hpp"
#include "sphmc/random.hpp"
#include "sphmc/sphere.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sphmc {

struct TraceMeta {
  KernelId kernel = KernelId::repro_pcn;
  double tuning = 0.0;
  std::uint64_t seed = 0;
  Eigen::Index dimension = 0;
};

/// Post-burn-in record of a chain run. Every series has one entry per
/// recorded step.
struct ChainTrace {
  std::map<std::string, std::vector<double>> functional_series;
  std::vector<Eigen::VectorXd> states;  // thinned, may be empty
  std::int64_t accepted_count = 0;
  std::int64_t step_count = 0;
  std::int64_t shrink_tries_total = 0;
  std::vector<double> jump_distances;
  TraceMeta meta;
  std::optional<SphereVector> final_state;
  double final_value = 0.0;

  double acceptance_rate() const {
    return step_count > 0 ? static_cast<double>(accepted_count) / static_cast<double>(step_count) : 0.0;
  }
  double mean_shrink_tries() const {
    return step_count > 0 ? static_cast<double>(shrink_tries_total) / static_cast<double>(step_count) : 0.0;
  }
};

using Functional = std::pair<std::string, std::function<double(const SphereVector&)>>;

struct ChainOptions {
  std::int64_t iterations = 0;  // total steps, burn-in included
  std::int64_t burn_in = 0;
  std::int64_t store_every = 0;  // 0 keeps no states
};

/// Iterates `kernel` from x0. The first `burn_in` steps are discarded; the
/// remaining steps contribute functional values, acceptance, shrink tries and
/// jump distances. Functionals are re-evaluated only when the state moved.
inline ChainTrace run_chain(const SphereKernel& kernel, SphereVector x0, const ChainOptions& options,
                            const std::vector<Functional>& functionals, Rng& rng) {
  if (options.burn_in < 0 || options.iterations <= options.burn_in)
    throw InvalidParameter("run_chain needs iterations > burn_in >= 0");
  if (options.store_every < 0) throw InvalidParameter("store_every must be non-negative");

  ChainTrace trace;
  trace.meta.kernel = kernel.id();
  trace.meta.tuning = kernel.tuning();
  trace.meta.dimension = x0.dimension();
  const std::int64_t recorded = options.iterations - options.burn_in;
  trace.jump_distances.reserve(static_cast<std::size_t>(recorded));
  for (const auto& [name, f] : functionals) trace.functional_series[name].reserve(static_cast<std::size_t>(recorded));

  SphereVector x = std::move(x0);
  double value = kernel.value(x);
  if (!std::isfinite(value)) throw ChainAborted("non-finite kernel value at the initial state");

  std::vector<double> current(functionals.size());
  bool stale = true;
  for (std::int64_t k = 0; k < options.iterations; ++k) {
    KernelStep<SphereVector> step = kernel.step(x, value, rng);
    const bool moved = step.accepted || step.shrink_tries.has_value();
    if (moved) {
      x = std::move(step.next_state);
      value = step.value;
      stale = true;
    }
    if (k < options.burn_in) continue;

    ++trace.step_count;
    if (step.accepted) ++trace.accepted_count;
    if (step.shrink_tries) trace.shrink_tries_total += *step.shrink_tries;
    trace.jump_distances.push_back(step.jump_distance);
    if (stale) {
      for (std::size_t i = 0; i < functionals.size(); ++i) {
        current[i] = functionals[i].second(x);
        if (!std::isfinite(current[i])) {
          std::ostringstream msg;
          msg << "functional '" << functionals[i].first << "' is non-finite at step " << k << ", state ["
              << x.coords().transpose() << "]";
          throw ChainAborted(msg.str());
        }
      }
      stale = false;
    }
    for (std::size_t i = 0; i < functionals.size(); ++i)
      trace.functional_series[functionals[i].first].push_back(current[i]);
    if (options.store_every > 0 && (k - options.burn_in) % options.store_every == 0)
      trace.states.push_back(x.coords());
  }
  trace.final_state = x;
  trace.final_value = value;
  return trace;
}

/// Runs an ambient kernel and records the projected path. The projected
/// process is generally not Markov; this is the negative control that stands
/// in for a "projected_wrapper" kernel.
template <class AmbientStep>
std::vector<SphereVector> run_projected_chain(const AmbientStep& step, Eigen::VectorXd x0, std::int64_t steps,
                                              Rng& rng) {
  std::vector<SphereVector> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  path.push_back(project_to_sphere(x0));
  for (std::int64_t k = 0; k < steps; ++k) {
    x0 = step(x0, rng);
    path.push_back(project_to_sphere(x0));
  }
  return path;
}

// ---------------------------------------------------------------------------
// Step-size tuning
// ---------------------------------------------------------------------------

struct TuningOptions {
  double target_rate = 0.23;
  double tolerance = 0.02;
  std::int64_t pilot_steps = 5000;
  int max_rounds = 20;
  double lower = 1e-4;
  double upper = 1.0;
};

/// Admissible parameter range per kernel family.
inline TuningOptions default_tuning_options(KernelId id) {
  TuningOptions o;
  switch (id) {
    case KernelId::geodesic_mh:
      o.lower = 1e-5;
      o.upper = 0.5 * std::numbers::pi;
      break;
    case KernelId::tangent_mh:
      o.lower = 1e-5;
      o.upper = 2.0;
      break;
    default:
      o.lower = 1e-4;
      o.upper = 1.0;
      break;
  }
  return o;
}

struct TuningResult {
  double parameter = 0.0;
  double measured_rate = 0.0;
  bool converged = false;
  bool flat_response = false;
  int rounds = 0;
  std::string warning;
  std::optional<SphereVector> final_state;
};

/// Bisection on the log step size. Each round runs a pilot chain continuing
/// from the previous pilot's end state. Acceptance decreases with the step
/// size for every supported family; if even the largest step is accepted
/// more often than the target, the largest step is returned with a warning.
inline TuningResult tune_step_size(const std::function<SphereKernel(double)>& family, SphereVector start,
                                   const TuningOptions& options, Rng& rng) {
  if (!(options.target_rate > 0.0 && options.target_rate < 1.0))
    throw InvalidParameter("target acceptance rate must lie in (0, 1)");
  if (!(options.lower > 0.0 && options.upper > options.lower))
    throw InvalidParameter("tuning bounds must satisfy 0 < lower < upper");

  TuningResult result;
  SphereVector state = std::move(start);
  auto pilot = [&](double parameter) {
    const SphereKernel kernel = family(parameter);
    ChainTrace t = run_chain(kernel, state, {options.pilot_steps, 0, 0}, {}, rng);
    state = *t.final_state;
    ++result.rounds;
    return t.acceptance_rate();
  };

  double rate = pilot(options.upper);
  result.parameter = options.upper;
  result.measured_rate = rate;
  if (std::abs(rate - options.target_rate) <= options.tolerance) {
    result.converged = true;
  } else if (rate > options.target_rate) {
    result.flat_response = true;
    result.warning = "acceptance stays above the target at the largest step size";
  } else {
    double lo = std::log(options.lower);
    double hi = std::log(options.upper);
    while (result.rounds < options.max_rounds) {
      const double mid = 0.5 * (lo + hi);
      result.parameter = std::exp(mid);
      rate = pilot(result.parameter);
      result.measured_rate = rate;
      if (std::abs(rate - options.target_rate) <= options.tolerance) {
        result.converged = true;
        break;
      }
      if (rate > options.target_rate)
        lo = mid;
      else
        hi = mid;
    }
    if (!result.converged) result.warning = "tuning did not reach the target band";
  }
  result.final_state = state;
  return result;
}

inline TuningResult tune_step_size(KernelId id, const CovarianceModel& cov, SpherePotential potential,
                                   SphereVector start, const TuningOptions& options, Rng& rng) {
  if (!is_metropolis(id) || is_negative_control(id))
    throw InvalidParameter(std::string(to_string(id)) + " has no tunable acceptance rate");
  auto family = [&](double p) { return make_sphere_kernel(id, cov, potential, p); };
  return tune_step_size(family, std::move(start), options, rng);
}

}  // namespace sphmc

#endif  // SPHMC_CHAIN_HPP
