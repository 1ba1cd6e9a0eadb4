#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace riskbandit {

/// Zero-based arm identifier. All user-facing I/O (CSV, CLI) is 1-based.
struct ArmIndex {
  std::size_t value = 0;

  constexpr ArmIndex() = default;
  constexpr explicit ArmIndex(std::size_t v) : value(v) {}

  constexpr std::size_t one_based() const { return value + 1; }
  friend constexpr bool operator==(ArmIndex, ArmIndex) = default;
  friend constexpr auto operator<=>(ArmIndex, ArmIndex) = default;
};

/// Coefficient of absolute risk tolerance rho in [0, 1].
/// rho = 1 is pure reward maximisation, rho = 0 pure variance minimisation.
class RiskTolerance {
 public:
  constexpr RiskTolerance() = default;
  explicit RiskTolerance(double rho) : rho_(rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw std::invalid_argument("risk tolerance rho must lie in [0, 1], got " +
                                  std::to_string(rho));
    }
  }

  /// rho = rho_tilde / (1 + rho_tilde); rho_tilde = +inf maps to 1.
  static RiskTolerance from_tilde(double rho_tilde) {
    if (!(rho_tilde >= 0.0)) {
      throw std::invalid_argument("rho_tilde must be >= 0, got " + std::to_string(rho_tilde));
    }
    if (rho_tilde == std::numeric_limits<double>::infinity()) return RiskTolerance(1.0);
    return RiskTolerance(rho_tilde / (1.0 + rho_tilde));
  }

  constexpr double value() const { return rho_; }

  /// rho / (1 - rho); +inf at rho = 1.
  double tilde() const {
    if (rho_ == 1.0) return std::numeric_limits<double>::infinity();
    return rho_ / (1.0 - rho_);
  }

 private:
  double rho_ = 0.5;
};

/// Common sub-Gaussianity parameter theta > 0.
class SubGaussianParam {
 public:
  explicit SubGaussianParam(double theta) : theta_(theta) {
    if (!(theta > 0.0) || theta == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("sub-Gaussian parameter theta must be finite and > 0, got " +
                                  std::to_string(theta));
    }
  }
  constexpr double value() const { return theta_; }

 private:
  double theta_;
};

}  // namespace riskbandit
