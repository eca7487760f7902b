#pragma once

#include <cmath>
#include <string>

#include "cascade_lab/cascade/state.hpp"
#include "cascade_lab/cascade/tensor.hpp"
#include "cascade_lab/error.hpp"

namespace cascade_lab::cascade {

struct CascadeConfig {
  double lambda = 2.0;  // scale ratio between consecutive shells
  double alpha = 1.0;   // dissipation exponent
  ShellRange shells{0, 11};
  double kappa = 1.0;   // dissipation prefactor
  CoefficientTensor tensor;
};

/// Throws DomainError on inadmissible parameters or a tensor failing validation.
/// lambda = 2 is admitted alongside 1 < lambda < 2 for the classical dyadic model.
inline void check_config(const CascadeConfig& config) {
  if (!(config.lambda > 1.0 && config.lambda <= 2.0)) {
    throw DomainError("lambda must satisfy 1 < lambda <= 2, got " + std::to_string(config.lambda));
  }
  if (!(config.alpha >= 0.0) || !std::isfinite(config.alpha)) {
    throw DomainError("alpha must be finite and non-negative");
  }
  if (!(config.kappa >= 0.0) || !std::isfinite(config.kappa)) {
    throw DomainError("kappa must be finite and non-negative");
  }
  if (config.shells.count() <= 0) throw DomainError("empty shell range");
  const auto report = validate_tensor(config.tensor);
  if (!report.valid()) {
    throw DomainError("coefficient tensor invalid: " + report.violations.front().message);
  }
}

}  // namespace cascade_lab::cascade
