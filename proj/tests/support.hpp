#ifndef SPHMC_TESTS_SUPPORT_HPP
#define SPHMC_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace testing_support {

/// Level of the KS checks in the unit suite. Dozens of them share one
/// false-alarm budget, so each runs well below 1%.
inline constexpr double kKsAlpha = 1e-4;

/// Per-entry check that the empirical covariance of centred samples lies within
/// `k` Monte Carlo standard errors of `target`. The standard error of the
/// (i, j) entry is estimated from the samples as sd(x_i x_j) / sqrt(n).
inline void expect_covariance_near(const std::vector<Eigen::VectorXd>& xs, const Eigen::MatrixXd& target,
                                   double k = 3.0) {
  const auto d = target.rows();
  const double n = static_cast<double>(xs.size());
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(d, d), m2 = Eigen::MatrixXd::Zero(d, d);
  for (const auto& x : xs) {
    const Eigen::MatrixXd p = x * x.transpose();
    m1 += p;
    m2 += p.cwiseProduct(p);
  }
  m1 /= n;
  m2 /= n;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double se = std::sqrt((m2(i, j) - m1(i, j) * m1(i, j)) / n);
      EXPECT_LE(std::abs(m1(i, j) - target(i, j)), k * se) << "entry (" << i << ", " << j << ")";
    }
}

/// The fixed 3x3 covariance used by several stationarity and marginal checks.
inline Eigen::Matrix3d example_covariance() {
  Eigen::Matrix3d c;
  c << 1.25, 0.33, -1.62, 0.33, 0.42, -0.09, -1.62, -0.09, 2.85;
  return c;
}

}  // namespace testing_support

#endif  // SPHMC_TESTS_SUPPORT_HPP
