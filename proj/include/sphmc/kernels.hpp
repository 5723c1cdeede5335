#ifndef SPHMC_KERNELS_HPP
#define SPHMC_KERNELS_HPP

#include "sphmc/errors.hpp"
#include "sphmc/gaussian.hpp"
#include "sphmc/random.hpp"
#include "sphmc/sphere.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace sphmc {

/// Result of one transition. `value` caches the scalar the kernel needs at
/// the next state (the potential for pCN/ESS kernels, the log-density for the
/// surface-measure MH kernels) so chains never evaluate it twice.
template <class State>
struct KernelStep {
  State next_state;
  bool accepted = true;
  std::optional<State> proposal;
  std::optional<std::int64_t> shrink_tries;
  double jump_distance = 0.0;
  double value = 0.0;
};

enum class KernelId {
  pcn_ambient,
  ess_ambient,
  repro_pcn,
  repro_ess,
  geodesic_mh,
  tangent_mh,
  naive_repro,
  projected_wrapper,
};

inline constexpr std::array<KernelId, 8> kAllKernelIds = {
    KernelId::pcn_ambient, KernelId::ess_ambient, KernelId::repro_pcn,   KernelId::repro_ess,
    KernelId::geodesic_mh, KernelId::tangent_mh,  KernelId::naive_repro, KernelId::projected_wrapper};

inline std::string_view to_string(KernelId id) {
  switch (id) {
    case KernelId::pcn_ambient: return "pcn_ambient";
    case KernelId::ess_ambient: return "ess_ambient";
    case KernelId::repro_pcn: return "repro_pcn";
    case KernelId::repro_ess: return "repro_ess";
    case KernelId::geodesic_mh: return "geodesic_mh";
    case KernelId::tangent_mh: return "tangent_mh";
    case KernelId::naive_repro: return "naive_repro";
    case KernelId::projected_wrapper: return "projected_wrapper";
  }
  return "unknown";
}

inline std::optional<KernelId> parse_kernel_id(std::string_view name) {
  for (auto id : kAllKernelIds)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

/// Kernels that are deliberately not invariant for the target.
inline bool is_negative_control(KernelId id) {
  return id == KernelId::naive_repro || id == KernelId::projected_wrapper;
}

/// Kernels with a Metropolis accept/reject step (and hence a tunable rate).
inline bool is_metropolis(KernelId id) {
  return id == KernelId::pcn_ambient || id == KernelId::repro_pcn || id == KernelId::geodesic_mh ||
         id == KernelId::tangent_mh || id == KernelId::naive_repro;
}

namespace detail {

inline void check_pcn_step(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw InvalidParameter("pCN step size must lie in (0, 1]");
}

template <class URBG>
bool metropolis_accept(double log_ratio, URBG& rng) {
  if (log_ratio >= 0.0) {
    uniform01(rng);  // keep the stream layout independent of the outcome
    return true;
  }
  return std::log(uniform01(rng)) <= log_ratio;
}

template <class F>
double checked(F&& f, const char* what) {
  const double v = f();
  if (std::isnan(v)) throw ChainAborted(std::string(what) + " returned NaN");
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ambient-space kernels on R^d
// ---------------------------------------------------------------------------

/// pCN-MH on R^d for a target with density exp(-phi) relative to N(0, C).
template <class Potential, class URBG>
KernelStep<Eigen::VectorXd> pcn_step_ambient(const Eigen::VectorXd& x, const CovarianceModel& cov, double s,
                                             const Potential& phi, URBG& rng,
                                             std::optional<double> phi_x = std::nullopt) {
  detail::check_pcn_step(s);
  const double phi_current = phi_x ? *phi_x : detail::checked([&] { return phi(x); }, "potential");
  const Eigen::VectorXd w = cov.sample(rng);
  Eigen::VectorXd y = std::sqrt(1.0 - s * s) * x + s * w;
  const double phi_y = detail::checked([&] { return phi(y); }, "potential");
  const bool accept = detail::metropolis_accept(phi_current - phi_y, rng);
  KernelStep<Eigen::VectorXd> out{accept ? y : x, accept, y, std::nullopt, 0.0, accept ? phi_y : phi_current};
  out.jump_distance = accept ? (y - x).norm() : 0.0;
  return out;
}

struct ShrinkResult {
  Eigen::VectorXd state;
  std::int64_t tries = 0;
  double potential = 0.0;
};

inline constexpr std::int64_t kMaxShrinkTries = 1'000'000;

/// Elliptical shrinkage towards x on the ellipse cos(theta) x + sin(theta) w.
///
/// Returns the first proposal y with -phi(y) >= log_level. The level is passed
/// in log space; the precondition log_level <= -phi(x) guarantees termination
/// because the bracket always contains theta = 0.
template <class Potential, class URBG>
ShrinkResult shrink_ellipse(const Eigen::VectorXd& x, double log_level, const CovarianceModel& cov,
                            const Potential& phi, URBG& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const Eigen::VectorXd w = cov.sample(rng);
  double theta = two_pi * uniform01(rng);
  double theta_min = theta - two_pi;
  double theta_max = theta;
  ShrinkResult out;
  while (out.tries < kMaxShrinkTries) {
    out.state = std::cos(theta) * x + std::sin(theta) * w;
    out.potential = detail::checked([&] { return phi(out.state); }, "potential");
    ++out.tries;
    if (-out.potential >= log_level) return out;
    if (theta < 0.0)
      theta_min = theta;
    else
      theta_max = theta;
    theta = theta_min + (theta_max - theta_min) * uniform01(rng);
  }
  throw NonTermination("shrink_ellipse exceeded the iteration cap");
}

/// Elliptical slice sampling step on R^d; always moves.
template <class Potential, class URBG>
KernelStep<Eigen::VectorXd> ess_step_ambient(const Eigen::VectorXd& x, const CovarianceModel& cov,
                                             const Potential& phi, URBG& rng,
                                             std::optional<double> phi_x = std::nullopt) {
  const double phi_current = phi_x ? *phi_x : detail::checked([&] { return phi(x); }, "potential");
  const double log_level = -phi_current + std::log(uniform01_open_closed(rng));
  ShrinkResult r = shrink_ellipse(x, log_level, cov, phi, rng);
  KernelStep<Eigen::VectorXd> out{r.state, true, std::nullopt, r.tries, (r.state - x).norm(), r.potential};
  return out;
}

// ---------------------------------------------------------------------------
// Reprojected kernels on S^{d-1} with ACG(C) prior
// ---------------------------------------------------------------------------

/// Reprojected pCN-MH: lift radially with the Gamma law, make one pCN
/// proposal in R^d, project, accept with min{1, exp(phi(x) - phi(y))}.
template <class Potential, class URBG>
KernelStep<SphereVector> repro_pcn_step(const SphereVector& x, const CovarianceModel& cov, double s,
                                        const Potential& phi, URBG& rng,
                                        std::optional<double> phi_x = std::nullopt) {
  detail::check_pcn_step(s);
  const double phi_current = phi_x ? *phi_x : detail::checked([&] { return phi(x); }, "potential");
  const Eigen::VectorXd lifted = lift(x, cov, rng);
  const Eigen::VectorXd w = cov.sample(rng);
  const SphereVector y = project_to_sphere(std::sqrt(1.0 - s * s) * lifted + s * w);
  const double phi_y = detail::checked([&] { return phi(y); }, "potential");
  const bool accept = detail::metropolis_accept(phi_current - phi_y, rng);
  return KernelStep<SphereVector>{accept ? y : x,         accept, y, std::nullopt,
                                  accept ? geodesic_distance(x, y) : 0.0, accept ? phi_y : phi_current};
}

/// Reprojected elliptical slice sampling: draw the level from the sphere
/// potential, lift radially, shrink on the ambient ellipse against
/// phi o project, project the result.
template <class Potential, class URBG>
KernelStep<SphereVector> repro_ess_step(const SphereVector& x, const CovarianceModel& cov,
                                        const Potential& phi, URBG& rng,
                                        std::optional<double> phi_x = std::nullopt) {
  const double phi_current = phi_x ? *phi_x : detail::checked([&] { return phi(x); }, "potential");
  const double log_level = -phi_current + std::log(uniform01_open_closed(rng));
  const Eigen::VectorXd lifted = lift(x, cov, rng);
  auto ambient = [&](const Eigen::VectorXd& y) { return phi(project_to_sphere(y)); };
  ShrinkResult r = shrink_ellipse(lifted, log_level, cov, ambient, rng);
  SphereVector y = project_to_sphere(r.state);
  const double jump = geodesic_distance(x, y);
  return KernelStep<SphereVector>{std::move(y), true, std::nullopt, r.tries, jump, r.potential};
}

// ---------------------------------------------------------------------------
// Surface-measure baselines
// ---------------------------------------------------------------------------

/// Orthonormal basis of the tangent space x^perp as the trailing d-1 columns
/// of the Householder QR factor of x.
inline Eigen::MatrixXd tangent_onb(const SphereVector& x) {
  const auto d = x.dimension();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(x.coords()));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  return q.rightCols(d - 1);
}

/// Metropolised geodesic random walk with fixed step length t in (0, pi/2].
/// log_density is log rho, the target density w.r.t. the surface measure.
template <class LogDensity, class URBG>
KernelStep<SphereVector> geodesic_mh_step(const SphereVector& x, double t, const LogDensity& log_density,
                                          URBG& rng, std::optional<double> log_rho_x = std::nullopt) {
  if (!(t > 0.0 && t <= 0.5 * std::numbers::pi))
    throw InvalidParameter("geodesic step length must lie in (0, pi/2]");
  const double lr_current = log_rho_x ? *log_rho_x : detail::checked([&] { return log_density(x); }, "log density");
  const auto d = x.dimension();
  const Eigen::MatrixXd u = tangent_onb(x);
  Eigen::VectorXd w = standard_normal_vector(d - 1, rng);
  w /= w.norm();
  const Eigen::VectorXd v = u * w;
  const SphereVector y(std::cos(t) * x.coords() + std::sin(t) * v);
  const double lr_y = detail::checked([&] { return log_density(y); }, "log density");
  const bool accept = detail::metropolis_accept(lr_y - lr_current, rng);
  return KernelStep<SphereVector>{accept ? y : x,         accept, y, std::nullopt,
                                  accept ? geodesic_distance(x, y) : 0.0, accept ? lr_y : lr_current};
}

/// Tangent-space MH: Gaussian tangent step v = U w with w ~ N(0, s^2 I),
/// projected back along x; proposals with |v| > 1 are rejected outright.
template <class LogDensity, class URBG>
KernelStep<SphereVector> tangent_mh_step(const SphereVector& x, double s, const LogDensity& log_density,
                                         URBG& rng, std::optional<double> log_rho_x = std::nullopt) {
  if (!(s > 0.0)) throw InvalidParameter("tangent step size must be positive");
  const double lr_current = log_rho_x ? *log_rho_x : detail::checked([&] { return log_density(x); }, "log density");
  const auto d = x.dimension();
  const Eigen::MatrixXd u = tangent_onb(x);
  const Eigen::VectorXd v = u * (s * standard_normal_vector(d - 1, rng));
  const double vv = v.squaredNorm();
  if (vv > 1.0) return KernelStep<SphereVector>{x, false, std::nullopt, std::nullopt, 0.0, lr_current};
  const SphereVector y(std::sqrt(1.0 - vv) * x.coords() + v);
  const double lr_y = detail::checked([&] { return log_density(y); }, "log density");
  const bool accept = detail::metropolis_accept(lr_y - lr_current, rng);
  return KernelStep<SphereVector>{accept ? y : x,         accept, y, std::nullopt,
                                  accept ? geodesic_distance(x, y) : 0.0, accept ? lr_y : lr_current};
}

/// log rho for a posterior with ACG(C) prior and potential phi, up to a
/// constant: -phi(x) - (d/2) log(x^T C^{-1} x).
template <class Potential>
auto acg_posterior_log_density(CovarianceModel cov, Potential phi) {
  return [cov = std::move(cov), phi = std::move(phi)](const SphereVector& x) {
    const double d = static_cast<double>(x.dimension());
    return -phi(x) - 0.5 * d * std::log(cov.precision_quadratic(x.coords()));
  };
}

// ---------------------------------------------------------------------------
// Negative controls
// ---------------------------------------------------------------------------

/// Naive reprojection: the ambient kernel is applied to x itself (no radial
/// lift) and the result is projected. Not invariant for ACG(C); only for
/// demonstrating why the lift is needed.
template <class InnerKernel, class URBG>
KernelStep<SphereVector> naive_repro_step(const SphereVector& x, const InnerKernel& inner, URBG& rng) {
  KernelStep<Eigen::VectorXd> s = inner(x.coords(), rng);
  SphereVector y = project_to_sphere(s.next_state);
  const double jump = geodesic_distance(x, y);
  return KernelStep<SphereVector>{std::move(y), s.accepted, std::nullopt, s.shrink_tries, jump, s.value};
}

// ---------------------------------------------------------------------------
// Type-erased sphere kernel used by the chain runner and the harness
// ---------------------------------------------------------------------------

using SpherePotential = std::function<double(const SphereVector&)>;

class SphereKernel {
 public:
  using Value = std::function<double(const SphereVector&)>;
  using Step = std::function<KernelStep<SphereVector>(const SphereVector&, double, Rng&)>;

  SphereKernel(KernelId id, double tuning, Value value, Step step)
      : id_(id), tuning_(tuning), value_(std::move(value)), step_(std::move(step)) {}

  KernelId id() const noexcept { return id_; }
  double tuning() const noexcept { return tuning_; }

  /// The cached scalar at x (potential or log-density, depending on kernel).
  double value(const SphereVector& x) const { return value_(x); }

  KernelStep<SphereVector> step(const SphereVector& x, double value_at_x, Rng& rng) const {
    return step_(x, value_at_x, rng);
  }

 private:
  KernelId id_;
  double tuning_;
  Value value_;
  Step step_;
};

enum class NegativeControl { forbid, allow };

/// Builds a sphere kernel for the posterior exp(-potential) d ACG(C).
///
/// `tuning` is s for repro_pcn / tangent_mh / naive_repro, t for geodesic_mh,
/// and ignored for repro_ess. Negative controls must be requested explicitly.
inline SphereKernel make_sphere_kernel(KernelId id, const CovarianceModel& cov, SpherePotential potential,
                                       double tuning, NegativeControl negative = NegativeControl::forbid) {
  if (is_negative_control(id) && negative != NegativeControl::allow)
    throw InvalidParameter(std::string(to_string(id)) + " is a negative control and needs an explicit opt-in");
  auto c = std::make_shared<const CovarianceModel>(cov);
  auto phi = std::make_shared<const SpherePotential>(std::move(potential));
  switch (id) {
    case KernelId::repro_pcn:
      detail::check_pcn_step(tuning);
      return SphereKernel(
          id, tuning, [phi](const SphereVector& x) { return (*phi)(x); },
          [c, phi, tuning](const SphereVector& x, double v, Rng& rng) {
            return repro_pcn_step(x, *c, tuning, *phi, rng, v);
          });
    case KernelId::repro_ess:
      return SphereKernel(
          id, 0.0, [phi](const SphereVector& x) { return (*phi)(x); },
          [c, phi](const SphereVector& x, double v, Rng& rng) { return repro_ess_step(x, *c, *phi, rng, v); });
    case KernelId::geodesic_mh:
    case KernelId::tangent_mh: {
      if (id == KernelId::geodesic_mh && !(tuning > 0.0 && tuning <= 0.5 * std::numbers::pi))
        throw InvalidParameter("geodesic step length must lie in (0, pi/2]");
      if (id == KernelId::tangent_mh && !(tuning > 0.0)) throw InvalidParameter("tangent step size must be positive");
      auto log_rho = [c, phi](const SphereVector& x) {
        const double d = static_cast<double>(x.dimension());
        return -(*phi)(x) - 0.5 * d * std::log(c->precision_quadratic(x.coords()));
      };
      if (id == KernelId::geodesic_mh)
        return SphereKernel(id, tuning, log_rho, [log_rho, tuning](const SphereVector& x, double v, Rng& rng) {
          return geodesic_mh_step(x, tuning, log_rho, rng, v);
        });
      return SphereKernel(id, tuning, log_rho, [log_rho, tuning](const SphereVector& x, double v, Rng& rng) {
        return tangent_mh_step(x, tuning, log_rho, rng, v);
      });
    }
    case KernelId::naive_repro: {
      detail::check_pcn_step(tuning);
      return SphereKernel(
          id, tuning, [phi](const SphereVector& x) { return (*phi)(x); },
          [c, phi, tuning](const SphereVector& x, double v, Rng& rng) {
            auto ambient = [&](const Eigen::VectorXd& y) { return (*phi)(project_to_sphere(y)); };
            auto inner = [&](const Eigen::VectorXd& a, Rng& r) {
              return pcn_step_ambient(a, *c, tuning, ambient, r, v);
            };
            return naive_repro_step(x, inner, rng);
          });
    }
    case KernelId::projected_wrapper:
      throw InvalidParameter("projected_wrapper is not a sphere kernel; run the ambient chain and project");
    case KernelId::pcn_ambient:
    case KernelId::ess_ambient:
      throw InvalidParameter(std::string(to_string(id)) + " acts on R^d, not on the sphere");
  }
  throw InvalidParameter("unknown kernel id");
}

}  // namespace sphmc

#endif  // SPHMC_KERNELS_HPP
