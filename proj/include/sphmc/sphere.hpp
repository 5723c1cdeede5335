#ifndef SPHMC_SPHERE_HPP
#define SPHMC_SPHERE_HPP

#include "sphmc/errors.hpp"
#include "sphmc/gaussian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace sphmc {

/// Point on the unit sphere S^{d-1} in R^d, d >= 2.
///
/// Inputs whose norm is within 1e-8 of one are renormalised silently; after
/// construction the norm is one to 1e-12. Anything further off is rejected,
/// because it signals a bug upstream rather than rounding drift.
class SphereVector {
 public:
  static constexpr double kRenormalizeTolerance = 1e-8;

  explicit SphereVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2)
      throw InvalidDimension("sphere points need dimension d >= 2, got " + std::to_string(coords_.size()));
    const double n = coords_.norm();
    if (!(std::abs(n - 1.0) <= kRenormalizeTolerance))
      throw InvalidParameter("vector is not on the unit sphere (norm " + std::to_string(n) + ")");
    if (n != 1.0) coords_ /= n;
  }

  /// Standard basis vector e_i (zero-based i).
  static SphereVector basis(Eigen::Index d, Eigen::Index i) {
    if (d < 2) throw InvalidDimension("sphere points need dimension d >= 2");
    return SphereVector(Eigen::VectorXd::Unit(d, i));
  }

  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  Eigen::Index dimension() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  friend bool operator==(const SphereVector& a, const SphereVector& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  Eigen::VectorXd coords_;
};

/// x = radius * direction with radius > 0.
struct RadialDecomposition {
  SphereVector direction;
  double radius;

  Eigen::VectorXd reconstruct() const { return radius * direction.coords(); }
};

/// Radial projection onto the sphere; the origin maps to the anchor e_d.
inline SphereVector project_to_sphere(const Eigen::VectorXd& x) {
  const auto d = x.size();
  if (d < 2) throw InvalidDimension("radial projection needs dimension d >= 2, got " + std::to_string(d));
  const double n = x.norm();
  if (n == 0.0) return SphereVector::basis(d, d - 1);
  return SphereVector(x / n);
}

inline RadialDecomposition radial_decompose(const Eigen::VectorXd& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw InvalidParameter("radial decomposition of the origin is undefined");
  return {project_to_sphere(x), r};
}

/// Great-circle distance arccos<a, b>, with the inner product clamped to [-1, 1].
inline double geodesic_distance(const SphereVector& a, const SphereVector& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch("geodesic_distance: dimension mismatch");
  const double c = std::clamp(a.coords().dot(b.coords()), -1.0, 1.0);
  return std::acos(c);
}

/// Same metric through the chord length, 2 asin(|a - b| / 2).
inline double chordal_geodesic_distance(const SphereVector& a, const SphereVector& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch("geodesic_distance: dimension mismatch");
  const double h = std::min(1.0, 0.5 * (a.coords() - b.coords()).norm());
  return 2.0 * std::asin(h);
}

/// Draw from ACG(C) by projecting a N(0, C) sample.
template <class URBG>
SphereVector acg_sample(const CovarianceModel& cov, URBG& rng) {
  return project_to_sphere(cov.sample(rng));
}

/// Log-density of ACG(C) with respect to the (d-1)-dimensional Hausdorff
/// measure on the sphere:
///   log Gamma(d/2) - log 2 - (d/2) log pi - (1/2) log det C - (d/2) log(x^T C^{-1} x).
inline double acg_log_density(const CovarianceModel& cov, const SphereVector& x) {
  const double d = static_cast<double>(x.dimension());
  return std::lgamma(0.5 * d) - std::log(2.0) - 0.5 * d * std::log(std::numbers::pi) -
         0.5 * cov.log_determinant() - 0.5 * d * std::log(cov.precision_quadratic(x.coords()));
}

/// Radius R of N(0, C) conditioned on direction x: R^2 ~ Gamma(d/2, rate = x^T C^{-1} x / 2).
template <class URBG>
double radial_conditional_sample(const CovarianceModel& cov, const SphereVector& x, URBG& rng) {
  const double d = static_cast<double>(x.dimension());
  const double rate = 0.5 * cov.precision_quadratic(x.coords());
  std::gamma_distribution<double> gamma(0.5 * d, 1.0 / rate);
  return std::sqrt(gamma(rng));
}

/// Radial lift of a sphere point to a N(0, C)-distributed ambient point with
/// the given direction.
template <class URBG>
Eigen::VectorXd lift(const SphereVector& x, const CovarianceModel& cov, URBG& rng) {
  return radial_conditional_sample(cov, x, rng) * x.coords();
}

}  // namespace sphmc

#endif  // SPHMC_SPHERE_HPP
