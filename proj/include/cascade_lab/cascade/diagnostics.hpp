#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cascade_lab/cascade/config.hpp"
#include "cascade_lab/cascade/system.hpp"

namespace cascade_lab::cascade {

/// Shell energy, taken as 1/2 X_{i,n}^2.
inline double shell_energy(const CascadeState& state, int species, int shell) {
  const double x = state.at(species, shell);
  return 0.5 * x * x;
}

inline double total_energy(const CascadeState& state) {
  double sum = 0.0;
  for (double x : state.values()) sum += x * x;
  return 0.5 * sum;
}

/// Ratio lambda^{(5/2 - 2 alpha) n} of the dissipation timescale to the cascade timescale at shell n.
inline double timescale_ratio(int n, double alpha, double lambda) {
  return std::pow(lambda, (2.5 - 2.0 * alpha) * n);
}

namespace detail {

/// Second-order three-point derivative on a non-uniform grid at the middle node.
inline double central_derivative(double t0, double t1, double t2, double f0, double f1, double f2) {
  const double h1 = t1 - t0;
  const double h2 = t2 - t1;
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

}  // namespace detail

/// Per interior sample: dE/dt (central difference) + kappa sum lambda^{2 alpha n} X^2.
inline std::vector<double> energy_balance_residual(const CascadeTrajectory& traj,
                                                   const CascadeConfig& config) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw DomainError("energy balance needs at least 3 samples");
  const CascadeSystem system(config);
  std::vector<double> residual;
  residual.reserve(s.size() - 2);
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double dE = detail::central_derivative(s[k - 1].time(), s[k].time(), s[k + 1].time(),
                                                 total_energy(s[k - 1]), total_energy(s[k]),
                                                 total_energy(s[k + 1]));
    residual.push_back(dE + system.dissipation(s[k].values()));
  }
  return residual;
}

/// Largest deviation between the finite-difference time derivative of the
/// trajectory and the cascade right-hand side, relative to max |rhs| over the
/// trajectory. Small values mean the samples solve the system of `config`.
inline double ode_residual(const CascadeTrajectory& traj, const CascadeConfig& config) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw DomainError("ode residual needs at least 3 samples");
  const CascadeSystem system(config);
  std::vector<double> f(system.size());
  double scale = 0.0;
  for (const auto& sample : s) {
    system.rhs(sample.values(), f);
    for (double v : f) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    system.rhs(s[k].values(), f);
    for (std::size_t c = 0; c < f.size(); ++c) {
      const double d = detail::central_derivative(s[k - 1].time(), s[k].time(), s[k + 1].time(),
                                                  s[k - 1].values()[c], s[k].values()[c],
                                                  s[k + 1].values()[c]);
      worst = std::max(worst, std::abs(d - f[c]));
    }
  }
  return worst / scale;
}

/// X'_{i,n}(t) = lambda^{(2 alpha - 5/2) m} X_{i,n-m}(lambda^{2 alpha m} t) on the same shell
/// range; shells whose source n-m falls outside the range are zero.
inline CascadeTrajectory rescale_trajectory(const CascadeTrajectory& traj, int m,
                                            const CascadeConfig& config) {
  const ShellRange range = config.shells;
  const ShellRange window{std::max(range.first, range.first + m), std::min(range.last, range.last + m)};
  if (window.count() <= 0) throw DomainError("rescaled shell window is empty");
  const double amplitude = std::pow(config.lambda, (2.0 * config.alpha - 2.5) * m);
  const double time_scale = std::pow(config.lambda, 2.0 * config.alpha * m);

  CascadeTrajectory out;
  out.status = traj.status;
  if (traj.blowup_time_estimate) out.blowup_time_estimate = *traj.blowup_time_estimate / time_scale;
  out.samples.reserve(traj.samples.size());
  for (const auto& sample : traj.samples) {
    if (sample.shells() != range) throw DomainError("trajectory shell range differs from config");
    CascadeState scaled(range, sample.time() / time_scale);
    for (int i = 1; i <= kSpeciesCount; ++i) {
      for (int n = window.first; n <= window.last; ++n) {
        scaled.at(i, n) = amplitude * sample.at(i, n - m);
      }
    }
    out.samples.push_back(std::move(scaled));
  }
  return out;
}

/// Shell carrying the most energy (summed over species).
inline int dominant_shell(const CascadeState& state) {
  const auto shells = state.shells();
  int best = shells.first;
  double best_e = -1.0;
  for (int n = shells.first; n <= shells.last; ++n) {
    double e = 0.0;
    for (int i = 1; i <= kSpeciesCount; ++i) e += shell_energy(state, i, n);
    if (e > best_e) {
      best_e = e;
      best = n;
    }
  }
  return best;
}

}  // namespace cascade_lab::cascade
