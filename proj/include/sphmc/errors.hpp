#ifndef SPHMC_ERRORS_HPP
#define SPHMC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sphmc {

/// Dimension outside the supported range (the sphere needs d >= 2).
class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tuning or model parameter outside its admissible range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Covariance that failed symmetry or positive-definiteness checks.
class NotPositiveDefinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonTermination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chain hit a non-finite potential or functional value.
class ChainAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects every violation found while validating a configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string out;
    for (const auto& e : errors) {
      if (!out.empty()) out += "; ";
      out += e;
    }
    return out;
  }

  std::vector<std::string> errors_;
};

}  // namespace sphmc

#endif  // SPHMC_ERRORS_HPP
