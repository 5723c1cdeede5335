#ifndef SPHMC_VERSION_HPP
#define SPHMC_VERSION_HPP

namespace sphmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sphmc

#endif  // SPHMC_VERSION_HPP
