#ifndef SPHMC_EIGEN_CACHE_HPP
#define SPHMC_EIGEN_CACHE_HPP

#include "sphmc/errors.hpp"
#include "sphmc/gaussian.hpp"
#include "sphmc/levelset.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphmc {

/// On-disk KL basis: `<stem>.bin` holds little-endian float64 values
/// (eigenvalues, then eigenfunctions column by column) and `<stem>.json`
/// describes grid size, pair count, spacing, covariance parameters and an
/// FNV-1a 64-bit checksum of the binary file.
struct EigenCacheInfo {
  std::int64_t grid_points = 0;
  std::int64_t pairs = 0;
  double delta_t = 0.0;
  std::string checksum;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::vector<unsigned char>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline void append_le(std::vector<unsigned char>& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
}

inline double read_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace detail

inline std::filesystem::path cache_binary_path(const std::filesystem::path& stem) {
  auto p = stem;
  p += ".bin";
  return p;
}

inline std::filesystem::path cache_sidecar_path(const std::filesystem::path& stem) {
  auto p = stem;
  p += ".json";
  return p;
}

inline EigenCacheInfo write_eigen_cache(const KarhunenLoeveBasis& kl, const std::filesystem::path& stem) {
  std::vector<unsigned char> bytes;
  bytes.reserve(static_cast<std::size_t>(8 * (kl.size() + kl.eigenfunctions.size())));
  for (Eigen::Index i = 0; i < kl.size(); ++i) detail::append_le(bytes, kl.eigenvalues[i]);
  for (Eigen::Index c = 0; c < kl.eigenfunctions.cols(); ++c)
    for (Eigen::Index r = 0; r < kl.eigenfunctions.rows(); ++r) detail::append_le(bytes, kl.eigenfunctions(r, c));

  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  {
    std::ofstream bin(cache_binary_path(stem), std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write eigen cache " + cache_binary_path(stem).string());
    bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  EigenCacheInfo info{kl.grid.size(), kl.size(), kl.delta_t, detail::hex64(detail::fnv1a64(bytes))};
  nlohmann::json side = {
      {"grid_points", info.grid_points},
      {"pairs", info.pairs},
      {"delta_t", info.delta_t},
      {"covariance", {{"family", "whittle_matern"}, {"variance", 1.0}, {"correlation_length", 0.1}, {"smoothness", 1.5}}},
      {"layout", "float64 little-endian: eigenvalues[pairs], eigenfunctions column-major [grid_points x pairs]"},
      {"checksum_fnv1a64", info.checksum},
  };
  std::ofstream js(cache_sidecar_path(stem));
  if (!js) throw std::runtime_error("cannot write eigen cache sidecar " + cache_sidecar_path(stem).string());
  js << side.dump(2) << '\n';
  return info;
}

inline KarhunenLoeveBasis read_eigen_cache(const std::filesystem::path& stem) {
  std::ifstream js(cache_sidecar_path(stem));
  if (!js) throw std::runtime_error("missing eigen cache sidecar " + cache_sidecar_path(stem).string());
  const nlohmann::json side = nlohmann::json::parse(js);
  const auto m = side.at("grid_points").get<std::int64_t>();
  const auto k = side.at("pairs").get<std::int64_t>();
  const double dt = side.at("delta_t").get<double>();

  std::ifstream bin(cache_binary_path(stem), std::ios::binary);
  if (!bin) throw std::runtime_error("missing eigen cache " + cache_binary_path(stem).string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  if (bytes.size() != static_cast<std::size_t>(8 * (k + m * k)))
    throw std::runtime_error("eigen cache size does not match its sidecar");
  if (detail::hex64(detail::fnv1a64(bytes)) != side.at("checksum_fnv1a64").get<std::string>())
    throw std::runtime_error("eigen cache checksum mismatch");

  KarhunenLoeveBasis kl;
  kl.delta_t = dt;
  kl.grid = levelset::uniform_grid(dt);
  if (kl.grid.size() != m) throw std::runtime_error("eigen cache grid does not match delta_t");
  kl.eigenvalues.resize(k);
  kl.eigenfunctions.resize(m, k);
  const unsigned char* p = bytes.data();
  for (std::int64_t i = 0; i < k; ++i, p += 8) kl.eigenvalues[i] = detail::read_le(p);
  for (std::int64_t c = 0; c < k; ++c)
    for (std::int64_t r = 0; r < m; ++r, p += 8) kl.eigenfunctions(r, c) = detail::read_le(p);
  return kl;
}

/// Loads the cache at `stem`, or builds and writes it when allowed.
inline KarhunenLoeveBasis load_or_build_basis(const std::filesystem::path& stem, double delta_t, bool allow_build) {
  if (std::filesystem::exists(cache_sidecar_path(stem))) {
    KarhunenLoeveBasis kl = read_eigen_cache(stem);
    if (std::abs(kl.delta_t - delta_t) > 1e-15) throw std::runtime_error("eigen cache was built for another delta_t");
    return kl;
  }
  if (!allow_build) throw std::runtime_error("eigen cache " + stem.string() + " missing and building is disabled");
  KarhunenLoeveBasis kl = levelset::whittle_matern_basis(delta_t);
  write_eigen_cache(kl, stem);
  return kl;
}

}  // namespace sphmc

#endif  // SPHMC_EIGEN_CACHE_HPP
