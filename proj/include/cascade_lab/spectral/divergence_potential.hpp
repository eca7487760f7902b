#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "cascade_lab/spectral/grid_field.hpp"

namespace cascade_lab::spectral {

struct DivergencePotentialOptions {
  /// Relative momentum |int psi| / int |psi| above which the input is rejected.
  double momentum_tolerance = 1e-10;
  /// Largest admissible |psi| on the box faces relative to max |psi|.
  double boundary_tolerance = 1e-6;
};

/// Smooth compact profile in z with unit integral over the box.
inline std::function<double(double)> default_z_profile(double box) {
  return [box](double z) {
    const double s = (z - 0.5 * box) / (0.25 * box);
    return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) / (0.25 * box * 0.443993816168079) : 0.0;
  };
}

namespace detail {

/// (g[a] - g[a-1]) / h along axis `axis`, with g[-1] = 0 (the box is not wrapped).
inline void backward_difference(const std::vector<double>& g, std::vector<double>& out, const GridSpec& grid, int axis) {
  const int n = grid.n;
  const double h = grid.spacing();
  out.assign(g.size(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int idx[3] = {a, b, c};
        const std::size_t k = grid.flat(a, b, c);
        double prev = 0.0;
        if (idx[axis] > 0) {
          int p[3] = {a, b, c};
          --p[axis];
          prev = g[grid.flat(p[0], p[1], p[2])];
        }
        out[k] = (g[k] - prev) / h;
      }
}

}  // namespace detail

/// Discrete divergence matching the cumulative sums used to build the potential:
/// backward differences on the non-periodic box.
inline ScalarField box_divergence(const VectorField& psi) {
  ScalarField out(psi.grid);
  std::vector<double> tmp;
  for (int d = 0; d < 3; ++d) {
    detail::backward_difference(psi.comp[static_cast<std::size_t>(d)], tmp, psi.grid, d);
    for (std::size_t k = 0; k < tmp.size(); ++k) out.comp[0][k] += tmp[k];
  }
  return out;
}

/// Psi = (Gamma, Gamma, Xi) with div Psi = psi, where
///   Gamma(x,y,z) = f(z) int_{<x} int_{<y} int psi,   Xi = int_{<z} (psi - d_x Gamma - d_y Gamma).
/// Integrals are left Riemann sums so the identity is exact for box_divergence.
inline VectorField divergence_potential(const ScalarField& psi, const std::function<double(double)>& f_profile,
                                        const DivergencePotentialOptions& opt = {}) {
  const auto& g = psi.grid;
  const int n = g.n;
  const double h = g.spacing();
  const auto& p = psi.comp[0];

  double total = 0.0, mass = 0.0, peak = 0.0, face = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double v = p[g.flat(a, b, c)];
        total += v;
        mass += std::abs(v);
        peak = std::max(peak, std::abs(v));
        if (a == 0 || b == 0 || c == 0 || a == n - 1 || b == n - 1 || c == n - 1) face = std::max(face, std::abs(v));
      }
  VectorField out(g);
  if (peak == 0.0) return out;
  if (std::abs(total) > opt.momentum_tolerance * mass) {
    throw DomainError("psi has nonzero momentum (int psi = " + std::to_string(total * g.cell_volume()) +
                      "); a decaying potential with div Psi = psi requires int psi = 0");
  }
  if (face > opt.boundary_tolerance * peak) throw DomainError("psi does not decay towards the box boundary");

  // S(x, y) = h^3 sum_{r<=x, s<=y, t} psi
  std::vector<double> plane(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += p[g.flat(a, b, c)];
      plane[static_cast<std::size_t>(a) * n + b] = s * h;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 1; b < n; ++b) plane[static_cast<std::size_t>(a) * n + b] += plane[static_cast<std::size_t>(a) * n + b - 1];
  for (int a = 1; a < n; ++a)
    for (int b = 0; b < n; ++b) plane[static_cast<std::size_t>(a) * n + b] += plane[static_cast<std::size_t>(a - 1) * n + b];
  for (auto& v : plane) v *= h * h;

  std::vector<double> fz(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) fz[static_cast<std::size_t>(c)] = f_profile(c * h);

  auto& gamma = out.comp[0];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        gamma[g.flat(a, b, c)] = fz[static_cast<std::size_t>(c)] * plane[static_cast<std::size_t>(a) * n + b];
  out.comp[1] = gamma;

  std::vector<double> dx, dy;
  detail::backward_difference(gamma, dx, g, 0);
  detail::backward_difference(gamma, dy, g, 1);
  auto& xi = out.comp[2];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double run = 0.0;
      for (int c = 0; c < n; ++c) {
        const std::size_t k = g.flat(a, b, c);
        run += (p[k] - dx[k] - dy[k]) * h;
        xi[k] = run;
      }
    }
  return out;
}

}  // namespace cascade_lab::spectral
