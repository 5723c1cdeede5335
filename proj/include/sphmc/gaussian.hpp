#ifndef SPHMC_GAUSSIAN_HPP
#define SPHMC_GAUSSIAN_HPP

#include "sphmc/errors.hpp"
#include "sphmc/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace sphmc {

/// Covariance of a centred Gaussian N(0, C) on R^d.
///
/// Two representations are supported. A dense SPD matrix is factored once
/// with a Cholesky decomposition. A spectral model stores eigenvalues
/// lambda_1 >= ... >= lambda_d > 0 and optionally an orthonormal eigenbasis;
/// without a basis it is the diagonal matrix diag(lambda).
///
/// Instances are immutable after construction and safe to share between
/// threads; sampling takes the caller's engine.
class CovarianceModel {
 public:
  enum class Representation { dense, spectral };

  static CovarianceModel dense(Eigen::MatrixXd c) {
    if (c.rows() != c.cols()) throw DimensionMismatch("covariance matrix must be square");
    if (c.rows() < 1) throw InvalidDimension("covariance dimension must be positive");
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw NotPositiveDefinite("covariance matrix is not symmetric");
    CovarianceModel m;
    m.repr_ = Representation::dense;
    m.dense_ = std::move(c);
    m.llt_.compute(m.dense_);
    if (m.llt_.info() != Eigen::Success)
      throw NotPositiveDefinite("Cholesky factorization failed: covariance is not positive definite");
    m.factor_ = m.llt_.matrixL();
    return m;
  }

  static CovarianceModel spectral(Eigen::VectorXd eigenvalues,
                                  std::optional<Eigen::MatrixXd> basis = std::nullopt) {
    const auto d = eigenvalues.size();
    if (d < 1) throw InvalidDimension("covariance dimension must be positive");
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(eigenvalues[i] > 0.0) || !std::isfinite(eigenvalues[i]))
        throw NotPositiveDefinite("spectral covariance needs finite positive eigenvalues");
      if (i > 0 && eigenvalues[i] > eigenvalues[i - 1])
        throw InvalidParameter("spectral eigenvalues must be sorted in descending order");
    }
    if (basis) {
      if (basis->rows() != d || basis->cols() != d)
        throw DimensionMismatch("eigenbasis must be d x d");
      const Eigen::MatrixXd gram = basis->transpose() * *basis;
      if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidParameter("eigenbasis columns are not orthonormal");
    }
    CovarianceModel m;
    m.repr_ = Representation::spectral;
    m.sqrt_eigs_ = eigenvalues.cwiseSqrt();
    m.eigs_ = std::move(eigenvalues);
    m.basis_ = std::move(basis);
    return m;
  }

  static CovarianceModel identity(Eigen::Index d) {
    return spectral(Eigen::VectorXd::Ones(d));
  }

  Eigen::Index dimension() const {
    return repr_ == Representation::dense ? dense_.rows() : eigs_.size();
  }

  Representation representation() const { return repr_; }

  /// Spectral models only.
  const Eigen::VectorXd& eigenvalues() const {
    if (repr_ != Representation::spectral) throw InvalidParameter("eigenvalues() needs a spectral model");
    return eigs_;
  }

  Eigen::MatrixXd matrix() const {
    if (repr_ == Representation::dense) return dense_;
    if (!basis_) return eigs_.asDiagonal();
    return *basis_ * eigs_.asDiagonal() * basis_->transpose();
  }

  double log_determinant() const {
    if (repr_ == Representation::dense) return 2.0 * factor_.diagonal().array().log().sum();
    return eigs_.array().log().sum();
  }

  /// Maps a standard normal vector z to C^{1/2}-coloured noise with law N(0, C).
  Eigen::VectorXd color(const Eigen::VectorXd& z) const {
    check_dimension(z);
    if (repr_ == Representation::dense) return factor_.triangularView<Eigen::Lower>() * z;
    Eigen::VectorXd scaled = sqrt_eigs_.cwiseProduct(z);
    if (basis_) return *basis_ * scaled;
    return scaled;
  }

  /// x^T C^{-1} x through the factorization; never forms C^{-1}.
  double precision_quadratic(const Eigen::VectorXd& x) const {
    check_dimension(x);
    if (repr_ == Representation::dense) {
      const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(x);
      return v.squaredNorm();
    }
    if (basis_) {
      const Eigen::VectorXd coeffs = basis_->transpose() * x;
      return (coeffs.array().square() / eigs_.array()).sum();
    }
    return (x.array().square() / eigs_.array()).sum();
  }

  template <class URBG>
  Eigen::VectorXd sample(URBG& rng) const {
    return color(standard_normal_vector(dimension(), rng));
  }

 private:
  CovarianceModel() = default;

  void check_dimension(const Eigen::VectorXd& x) const {
    if (x.size() != dimension())
      throw DimensionMismatch("vector of length " + std::to_string(x.size()) +
                              " does not match covariance dimension " + std::to_string(dimension()));
  }

  Representation repr_ = Representation::spectral;
  Eigen::MatrixXd dense_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd eigs_;
  Eigen::VectorXd sqrt_eigs_;
  std::optional<Eigen::MatrixXd> basis_;
};

template <class URBG>
Eigen::VectorXd gaussian_sample(const CovarianceModel& cov, URBG& rng) {
  return cov.sample(rng);
}

inline double precision_quadratic(const CovarianceModel& cov, const Eigen::VectorXd& x) {
  return cov.precision_quadratic(x);
}

/// Replayable stream of N(0, C) draws: equal seeds give equal sequences.
class GaussianSampleStream {
 public:
  GaussianSampleStream(CovarianceModel cov, std::uint64_t seed)
      : cov_(std::move(cov)), rng_(make_rng(seed)) {}

  Eigen::VectorXd next() { return cov_.sample(rng_); }
  const CovarianceModel& covariance() const { return cov_; }

 private:
  CovarianceModel cov_;
  Rng rng_;
};

/// Discrete Karhunen-Loeve basis of a covariance operator on a uniform grid
/// of [0, 1]. Eigenfunctions are stored as grid columns, normalised in the
/// rectangle-rule L^2 product: delta_t * sum_k phi_i(t_k) phi_j(t_k) = delta_ij.
struct KarhunenLoeveBasis {
  double delta_t = 0.0;
  Eigen::VectorXd grid;
  Eigen::VectorXd eigenvalues;     // descending, strictly positive
  Eigen::MatrixXd eigenfunctions;  // grid.size() x eigenvalues.size()

  Eigen::Index size() const { return eigenvalues.size(); }

  /// Prior of the first d KL coefficients, diag(lambda_1, ..., lambda_d).
  CovarianceModel coefficient_covariance(Eigen::Index d) const {
    check_truncation(d);
    return CovarianceModel::spectral(eigenvalues.head(d));
  }

  Eigen::MatrixXd leading_functions(Eigen::Index d) const {
    check_truncation(d);
    return eigenfunctions.leftCols(d);
  }

 private:
  void check_truncation(Eigen::Index d) const {
    if (d < 1 || d > size())
      throw InvalidDimension("KL truncation " + std::to_string(d) + " outside [1, " +
                             std::to_string(size()) + "]");
  }
};

/// Rectangle-rule (Nystrom) discretisation of the integral operator with
/// kernel c on a uniform grid, followed by a symmetric eigendecomposition.
///
/// Eigenvectors are rescaled by 1/sqrt(delta_t) to be L^2-orthonormal and
/// sign-normalised so that their first entry of magnitude above 1e-8 is
/// positive. Eigenvalues in (-1e-10 * lambda_1, 0] are clipped and dropped;
/// anything more negative raises NotPositiveDefinite.
template <class CovarianceFunction>
KarhunenLoeveBasis eigendecompose_kernel_matrix(const Eigen::VectorXd& grid, CovarianceFunction c,
                                                Eigen::Index max_pairs = 800) {
  const Eigen::Index m = grid.size();
  if (m < 2) throw InvalidDimension("grid needs at least two points");
  const double dt = grid[1] - grid[0];
  if (!(dt > 0.0)) throw InvalidParameter("grid must be increasing");
  for (Eigen::Index k = 1; k < m; ++k) {
    if (std::abs((grid[k] - grid[k - 1]) - dt) > 1e-9 * std::max(1.0, dt * m))
      throw InvalidParameter("grid must be uniformly spaced");
  }

  Eigen::MatrixXd kmat(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = c(grid[i], grid[j]) * dt;
      kmat(i, j) = v;
      kmat(j, i) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kmat);
  if (solver.info() != Eigen::Success) throw NotPositiveDefinite("eigensolver did not converge");

  // Eigen returns ascending order.
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double lambda_max = ev[m - 1];
  if (!(lambda_max > 0.0)) throw NotPositiveDefinite("kernel matrix has no positive eigenvalue");
  if (ev[0] < -1e-10 * lambda_max)
    throw NotPositiveDefinite("kernel matrix has a significantly negative eigenvalue");

  Eigen::Index positive = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (ev[i] > 0.0) ++positive;
  const Eigen::Index keep = std::min(positive, max_pairs);

  KarhunenLoeveBasis kl;
  kl.delta_t = dt;
  kl.grid = grid;
  kl.eigenvalues.resize(keep);
  kl.eigenfunctions.resize(m, keep);
  const double rescale = 1.0 / std::sqrt(dt);
  for (Eigen::Index k = 0; k < keep; ++k) {
    const Eigen::Index src = m - 1 - k;
    kl.eigenvalues[k] = ev[src];
    Eigen::VectorXd phi = solver.eigenvectors().col(src) * rescale;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(phi[i]) > 1e-8) {
        if (phi[i] < 0.0) phi = -phi;
        break;
      }
    }
    kl.eigenfunctions.col(k) = phi;
  }
  return kl;
}

}  // namespace sphmc

#endif  // SPHMC_GAUSSIAN_HPP
