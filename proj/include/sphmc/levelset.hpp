#ifndef SPHMC_LEVELSET_HPP
#define SPHMC_LEVELSET_HPP

#include "sphmc/errors.hpp"
#include "sphmc/gaussian.hpp"
#include "sphmc/random.hpp"
#include "sphmc/sphere.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace sphmc::levelset {

inline constexpr double kLowPhase = -2.0;
inline constexpr double kHighPhase = 2.0;
inline constexpr std::array<double, 4> kObservationPoints = {0.2, 0.4, 0.6, 0.8};
inline constexpr double kPressureRight = 2.0;

/// Whittle-Matern covariance, variance 1, correlation length 0.1, smoothness 3/2.
inline double whittle_matern_cov(double s, double t) {
  const double r = std::sqrt(3.0) * std::abs(t - s) / 0.1;
  return (1.0 + r) * std::exp(-r);
}

/// Uniform grid on [0, 1] with spacing delta_t; delta_t must divide 1.
inline Eigen::VectorXd uniform_grid(double delta_t) {
  if (!(delta_t > 0.0 && delta_t <= 0.5)) throw InvalidParameter("grid spacing must lie in (0, 0.5]");
  const double cells = 1.0 / delta_t;
  const auto n = static_cast<Eigen::Index>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(n)) > 1e-9 * cells)
    throw InvalidParameter("grid spacing must divide [0, 1] into whole cells");
  Eigen::VectorXd grid(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(n);
  return grid;
}

struct LevelSetField {
  Eigen::VectorXd g_values;
  Eigen::VectorXd u_values;
};

/// Two-phase log-permeability: u = -2 where g < 0 and +2 where g >= 0.
inline Eigen::VectorXd level_set_map(const Eigen::VectorXd& g) {
  return g.unaryExpr([](double v) { return v >= 0.0 ? kHighPhase : kLowPhase; });
}

/// Pressure of -(e^u p')' = 0 on [0, 1] with p(0) = 0, p(1) = 2:
/// p(t) = 2 S_t / S_1 where S_t integrates e^{-u} by the trapezoidal rule.
inline Eigen::VectorXd solve_darcy_1d(const Eigen::VectorXd& u_values, double delta_t) {
  const auto m = u_values.size();
  if (m < 2) throw InvalidDimension("solver needs at least two grid values");
  Eigen::VectorXd s(m);
  s[0] = 0.0;
  double prev = std::exp(-u_values[0]);
  for (Eigen::Index k = 1; k < m; ++k) {
    const double cur = std::exp(-u_values[k]);
    s[k] = s[k - 1] + 0.5 * delta_t * (prev + cur);
    prev = cur;
  }
  Eigen::VectorXd p = kPressureRight * s / s[m - 1];
  p[0] = 0.0;
  p[m - 1] = kPressureRight;
  return p;
}

/// Trapezoid integral of e^{-u} over [0, 1], inverted.
inline double effective_permeability(const Eigen::VectorXd& u_values, double delta_t) {
  const auto m = u_values.size();
  double total = 0.0;
  for (Eigen::Index k = 1; k < m; ++k) total += 0.5 * delta_t * (std::exp(-u_values[k - 1]) + std::exp(-u_values[k]));
  return 1.0 / total;
}

/// Value of a grid function at t: exact node lookup when t sits on a node,
/// linear interpolation otherwise.
inline double evaluate_on_grid(const Eigen::VectorXd& values, double delta_t, double t) {
  const double pos = t / delta_t;
  const double node = std::round(pos);
  const auto last = values.size() - 1;
  if (std::abs(pos - node) <= 1e-9) return values[std::clamp<Eigen::Index>(static_cast<Eigen::Index>(node), 0, last)];
  const auto k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), 0, last - 1);
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

/// Synthetic truth used to generate data.
inline Eigen::VectorXd default_truth() {
  Eigen::VectorXd x(8);
  x << 1, 2, 3, 4, 5, 1, 1, 1;
  return x;
}

/// Bayesian binary-classification problem on [0, 1] with KL coefficients
/// truncated at dimension d. Immutable after construction apart from the
/// data, which is set once by generate_synthetic_data or set_data.
class BenchmarkProblem {
 public:
  BenchmarkProblem(std::shared_ptr<const KarhunenLoeveBasis> basis, Eigen::Index dimension)
      : basis_(std::move(basis)), dimension_(dimension) {
    if (!basis_) throw InvalidParameter("benchmark needs a KL basis");
    if (dimension_ < 2) throw InvalidDimension("benchmark dimension must be >= 2");
    functions_ = basis_->leading_functions(dimension_);
    prior_ = std::make_shared<const CovarianceModel>(basis_->coefficient_covariance(dimension_));
  }

  Eigen::Index dimension() const { return dimension_; }
  double delta_t() const { return basis_->delta_t; }
  const KarhunenLoeveBasis& basis() const { return *basis_; }
  const CovarianceModel& prior() const { return *prior_; }
  const Eigen::Vector4d& data() const { return data_; }
  const Eigen::Vector4d& noise_variances() const { return noise_variances_; }
  const Eigen::Vector4d& true_observations() const { return true_observations_; }

  /// g(t_k) = sum_i x_i phi_i(t_k). Accepts any coefficient length up to the
  /// basis size so that the truth can use more terms than the chain.
  LevelSetField synthesize_level_set(const Eigen::VectorXd& x) const {
    LevelSetField f;
    if (x.size() == dimension_) {
      f.g_values = functions_ * x;
    } else {
      if (x.size() < 1 || x.size() > basis_->size())
        throw DimensionMismatch("coefficient vector longer than the KL basis");
      f.g_values = basis_->eigenfunctions.leftCols(x.size()) * x;
    }
    f.u_values = level_set_map(f.g_values);
    return f;
  }

  Eigen::Vector4d observe(const Eigen::VectorXd& pressure) const {
    Eigen::Vector4d o;
    for (std::size_t j = 0; j < kObservationPoints.size(); ++j)
      o[static_cast<Eigen::Index>(j)] = evaluate_on_grid(pressure, delta_t(), kObservationPoints[j]);
    return o;
  }

  /// x -> g -> u -> p -> (p(0.2), p(0.4), p(0.6), p(0.8)).
  Eigen::Vector4d forward_observe(const Eigen::VectorXd& x) const {
    const LevelSetField f = synthesize_level_set(x);
    return observe(solve_darcy_1d(f.u_values, delta_t()));
  }

  /// Weighted least-squares misfit 1/2 sum_j (y_j - F_j(x))^2 / sigma_j^2.
  double potential(const SphereVector& x) const {
    require_data();
    const Eigen::Vector4d r = data_ - forward_observe(x.coords());
    return 0.5 * (r.array().square() / noise_variances_.array()).sum();
  }

  double potential_ambient(const Eigen::VectorXd& x) const {
    require_data();
    const Eigen::Vector4d r = data_ - forward_observe(x);
    return 0.5 * (r.array().square() / noise_variances_.array()).sum();
  }

  /// Effective homogenised permeability (int exp(-u))^{-1}.
  double quantity_of_interest(const SphereVector& x) const {
    return effective_permeability(synthesize_level_set(x.coords()).u_values, delta_t());
  }

  /// y_j = o_j + eta_j with eta_j ~ N(0, o_j / 10) and o the noise-free
  /// observations of the truth. zero_noise sets eta = 0.
  Eigen::Vector4d generate_synthetic_data(const Eigen::VectorXd& truth, std::uint64_t noise_seed,
                                          bool zero_noise = false) {
    true_observations_ = forward_observe(truth);
    for (Eigen::Index j = 0; j < 4; ++j)
      if (!(true_observations_[j] > 0.0))
        throw InvalidParameter("true pressure must be positive at the observation points");
    noise_variances_ = true_observations_ / 10.0;
    Rng rng = make_rng(noise_seed, {0x6461746175ull});
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double eta = normal(rng);
      data_[j] = true_observations_[j] + (zero_noise ? 0.0 : std::sqrt(noise_variances_[j]) * eta);
    }
    has_data_ = true;
    return data_;
  }

  void set_data(const Eigen::Vector4d& y, const Eigen::Vector4d& noise_variances) {
    if ((noise_variances.array() <= 0.0).any()) throw InvalidParameter("noise variances must be positive");
    data_ = y;
    noise_variances_ = noise_variances;
    has_data_ = true;
  }

 private:
  void require_data() const {
    if (!has_data_) throw InvalidParameter("benchmark problem has no data");
  }

  std::shared_ptr<const KarhunenLoeveBasis> basis_;
  Eigen::Index dimension_;
  Eigen::MatrixXd functions_;
  std::shared_ptr<const CovarianceModel> prior_;
  Eigen::Vector4d data_ = Eigen::Vector4d::Zero();
  Eigen::Vector4d noise_variances_ = Eigen::Vector4d::Ones();
  Eigen::Vector4d true_observations_ = Eigen::Vector4d::Zero();
  bool has_data_ = false;
};

/// KL basis of the Whittle-Matern prior on the uniform grid of spacing delta_t.
inline KarhunenLoeveBasis whittle_matern_basis(double delta_t = 1e-3, Eigen::Index max_pairs = 800) {
  return eigendecompose_kernel_matrix(uniform_grid(delta_t), whittle_matern_cov, max_pairs);
}

}  // namespace sphmc::levelset

#endif  // SPHMC_LEVELSET_HPP
