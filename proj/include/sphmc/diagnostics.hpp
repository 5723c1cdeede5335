#ifndef SPHMC_DIAGNOSTICS_HPP
#define SPHMC_DIAGNOSTICS_HPP

#include "sphmc/chain.hpp"
#include "sphmc/errors.hpp"
#include "sphmc/sphere.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sphmc {

namespace detail {

// FFTW planning is not thread-safe; execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline std::size_t next_fast_size(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Biased empirical autocovariance gamma(k) = (1/n) sum (x_t - m)(x_{t+k} - m)
/// for k = 0..n-1, computed by zero-padded FFT.
inline std::vector<double> autocovariance(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n == 0) return {};
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  const std::size_t len = detail::next_fast_size(2 * n);
  const std::size_t bins = len / 2 + 1;

  double* in = fftw_alloc_real(len);
  fftw_complex* spec = fftw_alloc_complex(bins);
  fftw_plan forward;
  fftw_plan backward;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(len), spec, in, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = series[i] - mean;
  std::fill(in + n, in + len, 0.0);
  fftw_execute(forward);
  for (std::size_t k = 0; k < bins; ++k) {
    spec[k][0] = spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
    spec[k][1] = 0.0;
  }
  fftw_execute(backward);
  std::vector<double> acov(n);
  const double norm = 1.0 / (static_cast<double>(len) * static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) acov[k] = in[k] * norm;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_free(in);
  fftw_free(spec);
  return acov;
}

/// Integrated autocorrelation time 1 + 2 sum_k rho(k), truncated with Geyer's
/// initial positive sequence on the pair sums rho(2m) + rho(2m+1). A series
/// with zero variance has IACT 1; the result is clipped below at 1.
inline double iact(std::span<const double> series) {
  if (series.size() < 100) throw InvalidParameter("iact needs at least 100 values");
  for (double v : series)
    if (!std::isfinite(v)) throw InvalidParameter("iact needs finite values");
  const std::vector<double> acov = autocovariance(series);
  const double var = acov[0];
  const double scale = std::max(1.0, std::abs(std::accumulate(series.begin(), series.end(), 0.0) /
                                              static_cast<double>(series.size())));
  if (!(var > 1e-28 * scale * scale)) return 1.0;

  double pair_sum_total = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < acov.size(); ++m) {
    const double pair = acov[2 * m] + acov[2 * m + 1];
    if (pair <= 0.0) break;
    pair_sum_total += pair;
  }
  const double tau = -1.0 + 2.0 * pair_sum_total / var;
  return std::max(1.0, tau);
}

/// Root mean squared geodesic jump between consecutive states.
inline double rmsjd(std::span<const SphereVector> states) {
  if (states.size() < 2) throw InvalidParameter("rmsjd needs at least two states");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    const double j = geodesic_distance(states[k], states[k + 1]);
    sum += j * j;
  }
  return std::sqrt(sum / static_cast<double>(states.size() - 1));
}

/// Same estimator from the per-step jump distances a chain records.
inline double rmsjd_from_jumps(std::span<const double> jumps) {
  if (jumps.empty()) throw InvalidParameter("rmsjd needs at least one jump");
  double sum = 0.0;
  for (double j : jumps) sum += j * j;
  return std::sqrt(sum / static_cast<double>(jumps.size()));
}

struct MeanEstimate {
  double mean = 0.0;
  double half_width = 0.0;
  double iact = 1.0;
};

inline constexpr double kZ975 = 1.959964;

/// Mean with an asymptotic-variance confidence half-width z * sqrt(iact * var / n).
/// Only the 95% level is supported.
inline MeanEstimate mean_with_ci(std::span<const double> series, double confidence = 0.95) {
  if (std::abs(confidence - 0.95) > 1e-12) throw InvalidParameter("mean_with_ci supports confidence 0.95 only");
  if (series.size() < 100) throw InvalidParameter("mean_with_ci needs at least 100 values");
  const double n = static_cast<double>(series.size());
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  const double var = ss / n;
  MeanEstimate out;
  out.mean = mean;
  out.iact = iact(series);
  out.half_width = kZ975 * std::sqrt(out.iact * var / n);
  return out;
}

/// Gaussian kernel density estimate with Silverman's bandwidth
/// 0.9 min(sd, IQR / 1.34) n^{-1/5}, evaluated on `grid`.
inline std::vector<double> kde_marginal(std::span<const double> samples, std::span<const double> grid) {
  if (samples.size() < 1000) throw InvalidParameter("kde_marginal needs at least 1000 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw InvalidParameter("kde_marginal: samples have zero variance");
  auto quantile = [&](double p) {
    const double pos = p * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double h = 0.9 * spread * std::pow(n, -0.2);

  const double cutoff = 9.0 * h;  // exp(-40.5) is below double resolution relative to the peak
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> density(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto first = std::lower_bound(sorted.begin(), sorted.end(), grid[g] - cutoff);
    auto last = std::upper_bound(first, sorted.end(), grid[g] + cutoff);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (grid[g] - *it) / h;
      acc += std::exp(-0.5 * z * z);
    }
    density[g] = acc * norm;
  }
  return density;
}

/// Half the L1 distance between the binned empirical laws of two samples,
/// with `bins` equal-width bins over [lo, hi]. Values outside are clamped
/// into the edge bins.
inline double binned_tv(std::span<const double> a, std::span<const double> b, int bins, double lo, double hi) {
  if (a.empty() || b.empty()) throw InvalidParameter("binned_tv needs non-empty samples");
  if (bins < 1 || !(hi > lo)) throw InvalidParameter("binned_tv needs bins >= 1 and hi > lo");
  std::vector<double> pa(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(bins), 0.0);
  auto index = [&](double v) {
    const auto i = static_cast<long>(std::floor((v - lo) / (hi - lo) * bins));
    return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(bins) - 1));
  };
  for (double v : a) pa[index(v)] += 1.0 / static_cast<double>(a.size());
  for (double v : b) pb[index(v)] += 1.0 / static_cast<double>(b.size());
  double tv = 0.0;
  for (int i = 0; i < bins; ++i) tv += std::abs(pa[i] - pb[i]);
  return std::min(1.0, 0.5 * tv);
}

/// Binned TV over the joint range of both samples.
inline double binned_tv(std::span<const double> a, std::span<const double> b, int bins) {
  if (a.empty() || b.empty()) throw InvalidParameter("binned_tv needs non-empty samples");
  const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  const double lo = std::min(*amin, *bmin);
  double hi = std::max(*amax, *bmax);
  if (!(hi > lo)) return 0.0;
  hi = std::nextafter(hi, hi + 1.0);
  return binned_tv(a, b, bins, lo, hi);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("ks_two_sample needs non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

/// One-sample KS statistic against a continuous CDF.
inline double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidParameter("ks_one_sample needs samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic critical value c(alpha) sqrt((n + m) / (n m)) of the two-sample
/// KS test, with c(alpha) = sqrt(-log(alpha / 2) / 2).
inline double ks_two_sample_threshold(double n, double m, double alpha = 0.01) {
  return std::sqrt(-0.5 * std::log(0.5 * alpha)) * std::sqrt((n + m) / (n * m));
}

/// One-sample version, c(alpha) / sqrt(n).
inline double ks_one_sample_threshold(double n, double alpha = 0.01) {
  return std::sqrt(-0.5 * std::log(0.5 * alpha)) / std::sqrt(n);
}

struct DiagnosticsReport {
  double iact = 1.0;
  double rmsjd = 0.0;
  double acceptance_rate = 0.0;
  double mean = 0.0;
  double half_ci = 0.0;
  std::optional<double> mean_shrink_tries;
};

/// Summarises one functional of a trace together with chain-level statistics.
inline DiagnosticsReport summarize(const ChainTrace& trace, const std::string& functional) {
  const auto it = trace.functional_series.find(functional);
  if (it == trace.functional_series.end()) throw InvalidParameter("trace has no functional '" + functional + "'");
  const MeanEstimate m = mean_with_ci(it->second);
  DiagnosticsReport r;
  r.iact = m.iact;
  r.mean = m.mean;
  r.half_ci = m.half_width;
  r.rmsjd = rmsjd_from_jumps(trace.jump_distances);
  r.acceptance_rate = trace.acceptance_rate();
  if (trace.meta.kernel == KernelId::repro_ess || trace.meta.kernel == KernelId::ess_ambient)
    r.mean_shrink_tries = trace.mean_shrink_tries();
  return r;
}

}  // namespace sphmc

#endif  // SPHMC_DIAGNOSTICS_HPP
