#pragma once

// Discretely self-similar concentrating states: a species-1 pulse that climbs
// the shells as t -> T with the amplitude law of rescale_trajectory.

#include <cmath>
#include <vector>

#include "cascade_lab/cascade/state.hpp"

namespace cascade_lab::cascade {

struct ConcentratingProfile {
  double lambda = 2.0;
  double alpha = 1.0;
  ShellRange shells{3, 7};
  /// Gaussian width of the pulse in shell index.
  double width = 0.5;
  double amplitude = 1.0;
  /// T = time_scale * lambda^{-2 alpha n_min}.
  double time_scale = 1.0;
  int samples = 8;
};

inline double concentrating_end_time(const ConcentratingProfile& p) {
  return p.time_scale * std::pow(p.lambda, -2.0 * p.alpha * p.shells.first);
}

/// Samples at t_0 = 0, t_k = T(1 - 2^{-k}), t_last = T. At t_k the pulse sits at
/// s_k = n_min + k / (2 alpha log2 lambda) with amplitude lambda^{(2 alpha - 5/2) s_k};
/// the terminal sample puts it on the top shell.
inline CascadeTrajectory concentrating_sequence(const ConcentratingProfile& p) {
  if (p.samples < 2) throw DomainError("concentrating sequence needs at least 2 samples");
  if (p.shells.count() <= 0) throw DomainError("empty shell range");
  if (!(p.lambda > 1.0) || !(p.alpha > 0.0) || !(p.width > 0.0)) throw DomainError("bad profile parameters");
  const double T = concentrating_end_time(p);
  const double per_halving = 1.0 / (2.0 * p.alpha * std::log2(p.lambda));
  CascadeTrajectory out;
  out.status = TrajectoryStatus::completed;
  for (int k = 0; k < p.samples; ++k) {
    const bool last = k + 1 == p.samples;
    const double t = last ? T : T * (1.0 - std::exp2(-k));
    const double s = last ? p.shells.last : std::min<double>(p.shells.last, p.shells.first + k * per_halving);
    CascadeState x(p.shells, t);
    const double a = p.amplitude * std::pow(p.lambda, (2.0 * p.alpha - 2.5) * s);
    for (int n = p.shells.first; n <= p.shells.last; ++n) {
      const double z = (n - s) / p.width;
      x.at(1, n) = a * std::exp(-0.5 * z * z);
    }
    out.samples.push_back(std::move(x));
  }
  return out;
}

}  // namespace cascade_lab::cascade
