#ifndef SPHMC_RANDOM_HPP
#define SPHMC_RANDOM_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sphmc {

/// Default engine. Every chain owns exactly one.
using Rng = std::mt19937_64;

/// Seeds an engine from a base seed plus stream identifiers, so that workers
/// keyed by (kernel, dimension, seed) get decorrelated streams.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

template <class URBG>
Eigen::VectorXd standard_normal_vector(Eigen::Index n, URBG& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

/// Uniform on [0, 1).
template <class URBG>
double uniform01(URBG& rng) {
  // generate_canonical may round up to 1.0 on some library versions
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < 1.0 ? u : std::nextafter(1.0, 0.0);
}

/// Uniform on (0, 1]; used for slice levels so that log(u) is finite.
template <class URBG>
double uniform01_open_closed(URBG& rng) {
  return 1.0 - uniform01(rng);
}

}  // namespace sphmc

#endif  // SPHMC_RANDOM_HPP
