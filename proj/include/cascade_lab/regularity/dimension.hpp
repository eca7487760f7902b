#pragma once

#include <cmath>
#include <map>

#include "cascade_lab/error.hpp"

namespace cascade_lab::regularity {

struct DimensionFit {
  double d_est = 0.0;
  double intercept = 0.0;
  /// Largest |log2 N_j - fit| over the used levels.
  double residual = 0.0;
  int levels_used = 0;
};

/// Least-squares slope of log2 N_j against j over levels with N_j > 0.
inline DimensionFit dimension_estimate(const std::map<int, double>& counts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [j, c] : counts) {
    if (!(c > 0.0)) continue;
    const double y = std::log2(c);
    sx += j;
    sy += y;
    sxx += static_cast<double>(j) * j;
    sxy += j * y;
    ++n;
  }
  if (n < 4) throw DomainError("dimension estimate needs at least 4 levels with positive counts, got " + std::to_string(n));
  DimensionFit fit;
  const double den = n * sxx - sx * sx;
  fit.d_est = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.d_est * sx) / n;
  fit.levels_used = n;
  for (const auto& [j, c] : counts) {
    if (!(c > 0.0)) continue;
    fit.residual = std::max(fit.residual, std::abs(std::log2(c) - (fit.intercept + fit.d_est * j)));
  }
  return fit;
}

}  // namespace cascade_lab::regularity
