#include "sphmc/chain.hpp"
#include "sphmc/diagnostics.hpp"
#include "sphmc/harness/experiments.hpp"
#include "sphmc/kernels.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace sphmc;
using std::numbers::pi;

namespace {

const CovarianceModel& example_cov() {
  static const CovarianceModel c = CovarianceModel::dense(testing_support::example_covariance());
  return c;
}

double zero_ambient(const Eigen::VectorXd&) { return 0.0; }
double zero_sphere(const SphereVector&) { return 0.0; }

SphereVector uniform_sphere(Eigen::Index d, Rng& rng) { return project_to_sphere(standard_normal_vector(d, rng)); }

/// Per-coordinate two-sample KS of kernel^k from start-law draws against
/// fresh start-law draws, all independent replicas.
template <class Start, class Step>
void expect_invariant(const Start& start, const Step& step, int replicas, int k, Eigen::Index d, Rng& rng) {
  std::vector<std::vector<double>> moved(d, std::vector<double>(replicas)), fresh(d, std::vector<double>(replicas));
  for (int r = 0; r < replicas; ++r) {
    SphereVector x = start(rng);
    for (int i = 0; i < k; ++i) x = step(x, rng);
    const SphereVector y = start(rng);
    for (Eigen::Index c = 0; c < d; ++c) {
      moved[c][r] = x[c];
      fresh[c][r] = y[c];
    }
  }
  for (Eigen::Index c = 0; c < d; ++c)
    EXPECT_LT(ks_two_sample(moved[c], fresh[c]), ks_two_sample_threshold(replicas, replicas, testing_support::kKsAlpha)) << "coordinate " << c;
}

}  // namespace

// --- ambient pCN -----------------------------------------------------------

TEST(PcnAmbient, ConstantPotentialAlwaysAccepts) {
  Rng rng = make_rng(1);
  Eigen::VectorXd x = Eigen::Vector3d(1, 2, 3);
  for (int k = 0; k < 1000; ++k) {
    auto s = pcn_step_ambient(x, example_cov(), 0.3, [](const Eigen::VectorXd&) { return 7.0; }, rng);
    EXPECT_TRUE(s.accepted);
    x = s.next_state;
  }
}

TEST(PcnAmbient, UnitStepProposalIgnoresCurrentState) {
  Rng a = make_rng(2), b = make_rng(2);
  const auto sa = pcn_step_ambient(Eigen::Vector3d(1, 0, 0), example_cov(), 1.0, zero_ambient, a);
  const auto sb = pcn_step_ambient(Eigen::Vector3d(-4, 9, 2), example_cov(), 1.0, zero_ambient, b);
  EXPECT_EQ(*sa.proposal, *sb.proposal);
}

TEST(PcnAmbient, RejectsInvalidStep) {
  Rng rng = make_rng(3);
  EXPECT_THROW(pcn_step_ambient(Eigen::Vector3d(1, 0, 0), example_cov(), 0.0, zero_ambient, rng), InvalidParameter);
  EXPECT_THROW(pcn_step_ambient(Eigen::Vector3d(1, 0, 0), example_cov(), 1.5, zero_ambient, rng), InvalidParameter);
}

TEST(PcnAmbient, RejectionKeepsStateBitExact) {
  Rng rng = make_rng(4);
  auto phi = [](const Eigen::VectorXd& y) { return 10.0 * y.squaredNorm(); };
  Eigen::VectorXd x = Eigen::Vector3d(0.01, -0.02, 0.03);
  int rejected = 0;
  for (int k = 0; k < 2000; ++k) {
    const auto s = pcn_step_ambient(x, example_cov(), 0.8, phi, rng);
    if (!s.accepted) {
      ++rejected;
      EXPECT_EQ(s.next_state, x);
    }
    x = s.next_state;
  }
  EXPECT_GT(rejected, 100);
}

TEST(PcnAmbient, ZeroPotentialLeavesGaussianInvariantFromAnyStart) {
  Rng rng = make_rng(5);
  std::vector<Eigen::VectorXd> finals(50'000);
  for (auto& f : finals) {
    Eigen::VectorXd x = Eigen::Vector3d(5, -5, 5);
    for (int k = 0; k < 60; ++k) x = pcn_step_ambient(x, example_cov(), 0.5, zero_ambient, rng).next_state;
    f = x;
  }
  testing_support::expect_covariance_near(finals, testing_support::example_covariance());
}

// --- shrinkage and ESS -----------------------------------------------------

TEST(ShrinkEllipse, ZeroPotentialAcceptsFirstProposal) {
  Rng rng = make_rng(6);
  for (int k = 0; k < 100; ++k) {
    const auto r = shrink_ellipse(Eigen::Vector3d(1, 1, 1), std::log(uniform01_open_closed(rng)), example_cov(),
                                  zero_ambient, rng);
    EXPECT_EQ(r.tries, 1);
  }
}

TEST(ShrinkEllipse, ReturnedStateSatisfiesLevel) {
  Rng rng = make_rng(7);
  auto phi = [](const Eigen::VectorXd& y) { return 3.0 * std::pow(y[0] - 0.5, 2) + std::abs(y[2]); };
  Eigen::VectorXd x = Eigen::Vector3d(0.4, 0.1, -0.2);
  for (int k = 0; k < 5000; ++k) {
    const double log_level = -phi(x) + std::log(uniform01_open_closed(rng));
    const auto r = shrink_ellipse(x, log_level, example_cov(), phi, rng);
    EXPECT_GE(-phi(r.state), log_level);
    EXPECT_EQ(r.potential, phi(r.state));
    x = r.state;
  }
}

TEST(ShrinkEllipse, UnreachableLevelHitsIterationCap) {
  Rng rng = make_rng(8);
  EXPECT_THROW(shrink_ellipse(Eigen::Vector2d(1, 0), 1.0, CovarianceModel::identity(2),
                              [](const Eigen::VectorXd&) { return 0.0; }, rng),
               NonTermination);
}

TEST(EssAmbient, ZeroPotentialKeepsGaussianInvariant) {
  Rng rng = make_rng(9);
  std::vector<Eigen::VectorXd> finals(50'000);
  for (auto& f : finals) {
    Eigen::VectorXd x = example_cov().sample(rng);
    for (int k = 0; k < 5; ++k) x = ess_step_ambient(x, example_cov(), zero_ambient, rng).next_state;
    f = x;
  }
  testing_support::expect_covariance_near(finals, testing_support::example_covariance());
}

TEST(EssAmbient, SeedReplay) {
  auto phi = [](const Eigen::VectorXd& y) { return y.squaredNorm(); };
  Rng a = make_rng(10), b = make_rng(10);
  Eigen::VectorXd xa = Eigen::Vector3d(1, 2, 3), xb = xa;
  for (int k = 0; k < 100; ++k) {
    const auto sa = ess_step_ambient(xa, example_cov(), phi, a);
    const auto sb = ess_step_ambient(xb, example_cov(), phi, b);
    EXPECT_EQ(sa.next_state, sb.next_state);
    EXPECT_EQ(sa.shrink_tries, sb.shrink_tries);
    xa = sa.next_state;
    xb = sb.next_state;
  }
}

// --- reprojected kernels ---------------------------------------------------

TEST(ReproPcn, ConstantPotentialAcceptsEverything) {
  Rng rng = make_rng(11);
  SphereVector x = acg_sample(example_cov(), rng);
  for (int k = 0; k < 1000; ++k) {
    const auto s = repro_pcn_step(x, example_cov(), 0.5, [](const SphereVector&) { return 2.5; }, rng);
    EXPECT_TRUE(s.accepted);
    x = s.next_state;
  }
}

TEST(ReproPcn, LongChainMarginalsMatchDirectAcg) {
  Rng rng = make_rng(12);
  const SphereKernel k = make_sphere_kernel(KernelId::repro_pcn, example_cov(), zero_sphere, 0.5);
  std::vector<Functional> f;
  for (int c = 0; c < 3; ++c) f.push_back({"x" + std::to_string(c), [c](const SphereVector& x) { return x[c]; }});
  const ChainTrace t = run_chain(k, acg_sample(example_cov(), rng), {100'001, 1, 0}, f, rng);
  EXPECT_DOUBLE_EQ(t.acceptance_rate(), 1.0);
  Rng direct_rng = make_rng(13);
  std::vector<std::vector<double>> direct(3, std::vector<double>(100'000));
  for (int n = 0; n < 100'000; ++n) {
    const SphereVector y = acg_sample(example_cov(), direct_rng);
    for (int c = 0; c < 3; ++c) direct[c][n] = y[c];
  }
  for (int c = 0; c < 3; ++c)
    EXPECT_LT(ks_two_sample(t.functional_series.at("x" + std::to_string(c)), direct[c]), 0.015);
}

TEST(ReproPcn, OneStepFromTargetMatchesTarget) {
  Rng rng = make_rng(14);
  expect_invariant([](Rng& r) { return acg_sample(example_cov(), r); },
                   [](const SphereVector& x, Rng& r) {
                     return repro_pcn_step(x, example_cov(), 0.7, zero_sphere, r).next_state;
                   },
                   100'000, 1, 3, rng);
}

TEST(ReproEss, StationaryForAcgUnderZeroPotential) {
  Rng rng = make_rng(15);
  expect_invariant([](Rng& r) { return acg_sample(example_cov(), r); },
                   [](const SphereVector& x, Rng& r) { return repro_ess_step(x, example_cov(), zero_sphere, r).next_state; },
                   100'000, 3, 3, rng);
}

TEST(ReproEss, ZeroPotentialNeedsOneTry) {
  Rng rng = make_rng(16);
  SphereVector x = acg_sample(example_cov(), rng);
  for (int k = 0; k < 100; ++k) {
    const auto s = repro_ess_step(x, example_cov(), zero_sphere, rng);
    EXPECT_EQ(s.shrink_tries, 1);
    EXPECT_TRUE(s.accepted);
    x = s.next_state;
  }
}

// --- surface-measure baselines ---------------------------------------------

TEST(TangentOnb, ProjectorAndOrthonormality) {
  Rng rng = make_rng(17);
  for (Eigen::Index d : {2, 3, 7, 40}) {
    for (int k = 0; k < 20; ++k) {
      const SphereVector x = uniform_sphere(d, rng);
      const Eigen::MatrixXd u = tangent_onb(x);
      ASSERT_EQ(u.cols(), d - 1);
      EXPECT_LT((u.transpose() * x.coords()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((u.transpose() * u - Eigen::MatrixXd::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff(), 1e-10);
      const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(d, d) - x.coords() * x.coords().transpose();
      EXPECT_LT((u * u.transpose() - proj).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(TangentOnb, FirstAxisInThreeDimensions) {
  const Eigen::MatrixXd u = tangent_onb(SphereVector::basis(3, 0));
  EXPECT_LT(u.row(0).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TangentOnb, CircleGivesRotatedVector) {
  const double a = 0.7;
  const Eigen::MatrixXd u = tangent_onb(SphereVector(Eigen::Vector2d(std::cos(a), std::sin(a))));
  const Eigen::Vector2d t(-std::sin(a), std::cos(a));
  EXPECT_NEAR(std::abs(u.col(0).dot(t)), 1.0, 1e-14);
}

TEST(GeodesicMh, ProposalsAreUnitAndAtDistanceT) {
  Rng rng = make_rng(18);
  const double t = 0.37;
  SphereVector x = uniform_sphere(5, rng);
  for (int k = 0; k < 1000; ++k) {
    const auto s = geodesic_mh_step(x, t, zero_sphere, rng);
    ASSERT_TRUE(s.proposal);
    EXPECT_NEAR(s.proposal->coords().norm(), 1.0, 1e-12);
    EXPECT_NEAR(geodesic_distance(x, *s.proposal), t, 1e-7);
    x = s.next_state;
  }
}

TEST(GeodesicMh, RejectsStepOutsideRange) {
  Rng rng = make_rng(19);
  const SphereVector x = SphereVector::basis(3, 0);
  EXPECT_THROW(geodesic_mh_step(x, 0.0, zero_sphere, rng), InvalidParameter);
  EXPECT_THROW(geodesic_mh_step(x, 1.6, zero_sphere, rng), InvalidParameter);
}

TEST(GeodesicMh, UniformDensityAcceptsAndStaysUniformOnCircle) {
  Rng rng = make_rng(20);
  const int n = 100'000;
  std::vector<double> angles(n);
  for (auto& a : angles) {
    SphereVector x = uniform_sphere(2, rng);
    for (int k = 0; k < 3; ++k) {
      const auto s = geodesic_mh_step(x, 0.9, zero_sphere, rng);
      EXPECT_TRUE(s.accepted);
      x = s.next_state;
    }
    a = std::atan2(x[1], x[0]);
  }
  EXPECT_LT(ks_one_sample(angles, [](double a) { return (a + pi) / (2 * pi); }), ks_one_sample_threshold(n, testing_support::kKsAlpha));
}

TEST(TangentMh, LargeTangentStepsAreRejectedInPlace) {
  Rng rng = make_rng(21);
  const SphereVector x = uniform_sphere(4, rng);
  int outright = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = tangent_mh_step(x, 50.0, zero_sphere, rng);
    if (!s.proposal) {
      ++outright;
      EXPECT_FALSE(s.accepted);
      EXPECT_EQ(s.next_state, x);
    }
  }
  EXPECT_GT(outright, 990);
}

TEST(TangentMh, TinyStepsBarelyMoveAndAlwaysAccept) {
  Rng rng = make_rng(22);
  const SphereVector x = uniform_sphere(3, rng);
  for (int k = 0; k < 100; ++k) {
    const auto s = tangent_mh_step(x, 1e-9, zero_sphere, rng);
    EXPECT_TRUE(s.accepted);
    EXPECT_LT(geodesic_distance(x, s.next_state), 1e-7);
  }
}

TEST(TangentMh, UniformDensityStaysUniformOnCircle) {
  Rng rng = make_rng(23);
  const int n = 100'000;
  std::vector<double> angles(n);
  std::int64_t accepted = 0, steps = 0;
  for (auto& a : angles) {
    SphereVector x = uniform_sphere(2, rng);
    for (int k = 0; k < 3; ++k) {
      const auto s = tangent_mh_step(x, 0.05, zero_sphere, rng);
      accepted += s.accepted;
      ++steps;
      x = s.next_state;
    }
    a = std::atan2(x[1], x[0]);
  }
  EXPECT_GT(static_cast<double>(accepted) / steps, 0.999);
  EXPECT_LT(ks_one_sample(angles, [](double a) { return (a + pi) / (2 * pi); }), ks_one_sample_threshold(n, testing_support::kKsAlpha));
}

TEST(SurfaceBaselines, StationaryForAcgPosteriorDensity) {
  // rho(x) = ||x||_C^{-d} is the ACG(C) density; both baselines must keep it.
  const auto log_rho = acg_posterior_log_density(example_cov(), zero_sphere);
  Rng rng = make_rng(24);
  expect_invariant([](Rng& r) { return acg_sample(example_cov(), r); },
                   [&](const SphereVector& x, Rng& r) { return geodesic_mh_step(x, 0.8, log_rho, r).next_state; },
                   100'000, 3, 3, rng);
  expect_invariant([](Rng& r) { return acg_sample(example_cov(), r); },
                   [&](const SphereVector& x, Rng& r) { return tangent_mh_step(x, 0.6, log_rho, r).next_state; },
                   100'000, 3, 3, rng);
}

// --- negative controls -----------------------------------------------------

TEST(NaiveRepro, IdentityInnerKernelIsFixedPoint) {
  Rng rng = make_rng(25);
  const SphereVector x = uniform_sphere(3, rng);
  auto identity = [](const Eigen::VectorXd& a, Rng&) {
    return KernelStep<Eigen::VectorXd>{a, true, std::nullopt, std::nullopt, 0.0, 0.0};
  };
  EXPECT_EQ(naive_repro_step(x, identity, rng).next_state, x);
}

TEST(NaiveRepro, RequiresExplicitOptIn) {
  EXPECT_THROW(make_sphere_kernel(KernelId::naive_repro, example_cov(), zero_sphere, 0.7), InvalidParameter);
  EXPECT_NO_THROW(
      make_sphere_kernel(KernelId::naive_repro, example_cov(), zero_sphere, 0.7, NegativeControl::allow));
  EXPECT_THROW(make_sphere_kernel(KernelId::projected_wrapper, example_cov(), zero_sphere, 0.7, NegativeControl::allow),
               InvalidParameter);
}

TEST(NaiveRepro, OneStepMarginalsSeparateFromReprojection) {
  const int n = 1'000'000;
  Rng rng = make_rng(26);
  const auto naive = make_sphere_kernel(KernelId::naive_repro, example_cov(), zero_sphere, 0.7, NegativeControl::allow);
  const auto repro = make_sphere_kernel(KernelId::repro_pcn, example_cov(), zero_sphere, 0.7);
  std::vector<double> target(n), a(n), b(n);
  for (int k = 0; k < n; ++k) {
    target[k] = acg_sample(example_cov(), rng)[2];
    a[k] = naive.step(acg_sample(example_cov(), rng), 0.0, rng).next_state[2];
    b[k] = repro.step(acg_sample(example_cov(), rng), 0.0, rng).next_state[2];
  }
  const double ks_naive = ks_two_sample(a, target), ks_repro = ks_two_sample(b, target);
  EXPECT_GT(ks_naive, 5.0 * ks_repro);
  EXPECT_GT(ks_naive, 5.0 * ks_two_sample_threshold(n, n));
}

// --- reversibility and ergodicity on the circle ----------------------------

TEST(Reversibility, BinnedJointCountsAreSymmetric) {
  const CovarianceModel cov = CovarianceModel::spectral(Eigen::Vector2d(2.0, 0.5));
  const SpherePotential phi = harness::circle_potential;
  for (auto id : {KernelId::repro_pcn, KernelId::repro_ess}) {
    Rng rng = make_rng(27);
    const auto k = make_sphere_kernel(id, cov, phi, 0.5);
    const auto db = harness::detailed_balance_check(k, cov, 1'000'000, rng);
    EXPECT_LT(std::abs(db.chi2_per_dof - 1.0), 4.0 * std::sqrt(2.0 / db.pairs_used)) << to_string(id);
  }
}

TEST(Reversibility, CheckDetectsNonReversibleKernel) {
  const CovarianceModel cov = CovarianceModel::spectral(Eigen::Vector2d(2.0, 0.5));
  const SpherePotential phi = harness::circle_potential;
  // A deterministic rotation by one bin width preserves nothing and is not reversible.
  const SphereKernel rotate(KernelId::repro_pcn, 0.0, phi, [](const SphereVector& x, double v, Rng&) {
    const double a = 2.0 * pi / harness::kCircleBins;
    const Eigen::Vector2d y(std::cos(a) * x[0] - std::sin(a) * x[1], std::sin(a) * x[0] + std::cos(a) * x[1]);
    return KernelStep<SphereVector>{SphereVector(y), true, std::nullopt, std::nullopt, a, v};
  });
  Rng rng = make_rng(28);
  const auto db = harness::detailed_balance_check(rotate, cov, 200'000, rng);
  EXPECT_GT(db.chi2_per_dof, 10.0);
}

TEST(Ergodicity, BinnedTvDecaysFromAntipodalStarts) {
  const CovarianceModel cov = CovarianceModel::spectral(Eigen::Vector2d(2.0, 0.5));
  const SpherePotential phi = harness::circle_potential;
  Rng rng = make_rng(29);
  const auto k = make_sphere_kernel(KernelId::repro_pcn, cov, phi, 0.5);
  auto target_angles = [&](std::size_t n) {
    std::vector<double> out(n);
    for (auto& a : out) {
      const SphereVector x = harness::circle_target_sample(cov, rng);
      a = std::atan2(x[1], x[0]);
    }
    return out;
  };
  const std::vector<double> stationary = target_angles(100'000);
  // Binned TV between exact samples of the replica count: the sampling floor.
  const double floor = binned_tv(target_angles(10'000), stationary, 36, -pi, pi);
  for (const Eigen::Vector2d& start : {Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0)}) {
    std::vector<SphereVector> replicas(10'000, SphereVector(start));
    std::vector<double> tv;
    int done = 0;
    for (int n : {1, 2, 4, 8, 16, 32}) {
      for (; done < n; ++done)
        for (auto& x : replicas) x = k.step(x, k.value(x), rng).next_state;
      std::vector<double> angles(replicas.size());
      for (std::size_t i = 0; i < replicas.size(); ++i) angles[i] = std::atan2(replicas[i][1], replicas[i][0]);
      tv.push_back(binned_tv(angles, stationary, 36, -pi, pi));
    }
    for (std::size_t i = 1; i < tv.size(); ++i) EXPECT_LE(tv[i], tv[i - 1] + 0.02) << "n index " << i;
    EXPECT_LT(tv[3], 0.5 * tv[0]);
    EXPECT_LT(tv.back(), floor + 0.02);
  }
}

// --- chain runner and tuner ------------------------------------------------

TEST(RunChain, StationaryStubGivesConstantSeries) {
  const SphereKernel stay(KernelId::repro_pcn, 0.0, zero_sphere, [](const SphereVector& x, double v, Rng&) {
    return KernelStep<SphereVector>{x, true, std::nullopt, std::nullopt, 0.0, v};
  });
  Rng rng = make_rng(30);
  const ChainTrace t = run_chain(stay, SphereVector::basis(3, 1), {200, 50, 10}, {{"x1", [](const SphereVector& x) {
                                                                                     return x[1];
                                                                                   }}},
                                 rng);
  EXPECT_EQ(t.step_count, 150);
  EXPECT_EQ(t.states.size(), 15u);
  for (double v : t.functional_series.at("x1")) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(rmsjd_from_jumps(t.jump_distances), 0.0);
}

TEST(RunChain, SeedReplayIsBitIdentical) {
  const auto phi = [](const SphereVector& x) { return 2.0 * x[0] * x[2]; };
  const auto kernel = make_sphere_kernel(KernelId::repro_ess, example_cov(), phi, 0.0);
  const std::vector<Functional> f{{"x0", [](const SphereVector& x) { return x[0]; }}};
  Rng a = make_rng(31), b = make_rng(31);
  const ChainTrace ta = run_chain(kernel, SphereVector::basis(3, 2), {2000, 100, 0}, f, a);
  const ChainTrace tb = run_chain(kernel, SphereVector::basis(3, 2), {2000, 100, 0}, f, b);
  EXPECT_EQ(ta.functional_series, tb.functional_series);
  EXPECT_EQ(ta.jump_distances, tb.jump_distances);
  EXPECT_EQ(ta.shrink_tries_total, tb.shrink_tries_total);
}

TEST(RunChain, NonFiniteFunctionalAborts) {
  const auto kernel = make_sphere_kernel(KernelId::repro_pcn, example_cov(), zero_sphere, 0.5);
  Rng rng = make_rng(32);
  EXPECT_THROW(run_chain(kernel, SphereVector::basis(3, 0), {10, 0, 0},
                         {{"bad", [](const SphereVector&) { return std::nan(""); }}}, rng),
               ChainAborted);
  EXPECT_THROW(run_chain(kernel, SphereVector::basis(3, 0), {10, 10, 0}, {}, rng), InvalidParameter);
}

TEST(Tuner, FlatResponseAtZeroPotentialWarns) {
  Rng rng = make_rng(33);
  const auto r = tune_step_size(KernelId::repro_pcn, example_cov(), zero_sphere, SphereVector::basis(3, 0),
                                default_tuning_options(KernelId::repro_pcn), rng);
  EXPECT_TRUE(r.flat_response);
  EXPECT_FALSE(r.warning.empty());
  EXPECT_DOUBLE_EQ(r.parameter, 1.0);
}

TEST(Tuner, ReachesTargetBandAndAcceptanceFallsWithStepSize) {
  const auto phi = [](const SphereVector& x) { return 20.0 * (1.0 - x[0]); };
  Rng rng = make_rng(34);
  const auto r = tune_step_size(KernelId::repro_pcn, example_cov(), phi, SphereVector::basis(3, 0),
                                default_tuning_options(KernelId::repro_pcn), rng);
  ASSERT_TRUE(r.converged) << r.warning;
  EXPECT_NEAR(r.measured_rate, 0.23, 0.02);
  auto rate = [&](double s) {
    const auto k = make_sphere_kernel(KernelId::repro_pcn, example_cov(), phi, s);
    return run_chain(k, *r.final_state, {20'000, 2'000, 0}, {}, rng).acceptance_rate();
  };
  EXPECT_GT(rate(0.5 * r.parameter), rate(r.parameter) + 0.03);
}

TEST(Tuner, RejectsNonMetropolisKernels) {
  Rng rng = make_rng(35);
  EXPECT_THROW(tune_step_size(KernelId::repro_ess, example_cov(), zero_sphere, SphereVector::basis(3, 0), {}, rng),
               InvalidParameter);
}
