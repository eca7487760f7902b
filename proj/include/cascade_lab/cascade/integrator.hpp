#pragma once

// Adaptive Dormand-Prince 5(4) integration of the cascade system with PI step
// control, plus the blowup guard used as a finite-time singularity proxy for
// the truncated system.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "cascade_lab/cascade/config.hpp"
#include "cascade_lab/cascade/system.hpp"

namespace cascade_lab::cascade {

struct IntegratorOptions {
  double rel_tol = 1e-8;
  /// Absolute floor of the error scale; negative selects rel_tol * 1e-6 * max|X(0)|.
  double abs_tol = -1.0;
  /// Smallest admissible step; negative selects 1e-9 * (t_end - t0).
  double h_min = -1.0;
  double h_max = std::numeric_limits<double>::infinity();
  /// Blowup guard on sum lambda^{2n} X^2, as a multiple of its initial value.
  double guard_factor = 1e12;
  std::size_t max_steps = 5'000'000;
  /// Error per unit step: a step of size h may commit rel_tol * h / (t_end - t0), so the
  /// local errors of a whole run add up to about rel_tol.
  bool per_unit_step = true;
};

/// sum_{i,n} lambda^{2n} X_{i,n}^2
inline double energy_weighted_norm(const CascadeState& state, double lambda) {
  double sum = 0.0;
  const auto shells = state.shells();
  for (int i = 1; i <= kSpeciesCount; ++i) {
    for (int n = shells.first; n <= shells.last; ++n) {
      const double x = state.at(i, n);
      sum += std::pow(lambda, 2.0 * n) * x * x;
    }
  }
  return sum;
}

namespace detail {

struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

inline CascadeTrajectory integrate(const CascadeConfig& config, const CascadeState& initial,
                                   double t_end, const IntegratorOptions& options = {}) {
  using DP = detail::DormandPrince;
  if (!initial.finite()) throw DomainError("initial state is not finite");
  if (initial.shells() != config.shells) throw DomainError("initial state shell range differs");
  if (!(t_end > initial.time())) throw DomainError("t_end must exceed the initial time");
  if (!(options.rel_tol > 1e-14 && options.rel_tol < 1e-2)) {
    throw DomainError("rel_tol must lie in (1e-14, 1e-2)");
  }

  const CascadeSystem system(config);
  const std::size_t dim = system.size();
  const double span = t_end - initial.time();
  const double rtol = options.rel_tol;
  double max_abs = 0.0;
  for (double v : initial.values()) max_abs = std::max(max_abs, std::abs(v));
  const double atol = options.abs_tol >= 0.0
                          ? options.abs_tol
                          : std::max(rtol * 1e-6 * max_abs, std::numeric_limits<double>::min());
  const double h_min = options.h_min >= 0.0 ? options.h_min : 1e-9 * span;
  const double h_max = std::min(options.h_max, span);
  const double guard = options.guard_factor *
                       std::max(energy_weighted_norm(initial, config.lambda),
                                std::numeric_limits<double>::min());

  CascadeTrajectory traj;
  traj.samples.push_back(initial);

  std::vector<double> y(initial.values().begin(), initial.values().end());
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  std::vector<double> tmp(dim), ynew(dim);
  double t = initial.time();
  system.rhs(y, k1);

  auto scale = [&](double a, double b) {
    return atol + rtol * std::max(std::abs(a), std::abs(b));
  };

  // Initial step (Hairer and Wanner, hinit).
  double h;
  {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double sk = scale(y[i], y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * span : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, h_max);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k1[i];
    system.rhs(tmp, k2);
    double der2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = (k2[i] - k1[i]) / scale(y[i], y[i]);
      der2 += d * d;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6 * span, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::max(std::min({100.0 * h, h1, h_max}), std::min(h_min, h_max));
  }

  constexpr double safety = 0.9, beta = 0.04;
  const double expo1 = (options.per_unit_step ? 0.25 : 0.2) - beta * 0.75;
  constexpr double fac_lo = 0.2, fac_hi = 10.0;
  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  auto finish = [&](TrajectoryStatus status) {
    traj.status = status;
    if (status == TrajectoryStatus::blowup_detected) traj.blowup_time_estimate = t;
    return traj;
  };
  auto guard_exceeded = [&] { return energy_weighted_norm(traj.samples.back(), config.lambda) > guard; };

  while (t < t_end) {
    if (steps++ >= options.max_steps) return finish(TrajectoryStatus::step_underflow);
    if (h < h_min) {
      return finish(guard_exceeded() ? TrajectoryStatus::blowup_detected
                                     : TrajectoryStatus::step_underflow);
    }
    bool final_step = false;
    if (t + 1.01 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }

    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * DP::a21 * k1[i];
    system.rhs(tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (DP::a31 * k1[i] + DP::a32 * k2[i]);
    system.rhs(tmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = y[i] + h * (DP::a41 * k1[i] + DP::a42 * k2[i] + DP::a43 * k3[i]);
    system.rhs(tmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = y[i] + h * (DP::a51 * k1[i] + DP::a52 * k2[i] + DP::a53 * k3[i] + DP::a54 * k4[i]);
    system.rhs(tmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      tmp[i] = y[i] + h * (DP::a61 * k1[i] + DP::a62 * k2[i] + DP::a63 * k3[i] +
                           DP::a64 * k4[i] + DP::a65 * k5[i]);
    system.rhs(tmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (DP::a71 * k1[i] + DP::a73 * k3[i] + DP::a74 * k4[i] +
                            DP::a75 * k5[i] + DP::a76 * k6[i]);
    system.rhs(ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double e = h * (DP::e1 * k1[i] + DP::e3 * k3[i] + DP::e4 * k4[i] + DP::e5 * k5[i] +
                            DP::e6 * k6[i] + DP::e7 * k7[i]);
      const double r = e / scale(y[i], ynew[i]);
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(dim));
    if (options.per_unit_step) err *= span / h;
    if (!std::isfinite(err)) {
      h *= fac_lo;
      last_rejected = true;
      ++traj.rejected_steps;
      continue;
    }

    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::clamp(fac / safety, 1.0 / fac_hi, 1.0 / fac_lo);
    double h_next = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      t = final_step ? t_end : t + h;
      y.swap(ynew);
      k1.swap(k7);
      CascadeState sample(config.shells, t);
      std::copy(y.begin(), y.end(), sample.values().begin());
      traj.samples.push_back(std::move(sample));
      if (last_rejected) h_next = std::min(h_next, h);
      last_rejected = false;
      h = std::min(h_next, h_max);
      if (t < t_end && h < h_min && guard_exceeded()) {
        return finish(TrajectoryStatus::blowup_detected);
      }
    } else {
      h = h / std::min(1.0 / fac_lo, fac11 / safety);
      last_rejected = true;
      ++traj.rejected_steps;
    }
  }
  return finish(TrajectoryStatus::completed);
}

}  // namespace cascade_lab::cascade
