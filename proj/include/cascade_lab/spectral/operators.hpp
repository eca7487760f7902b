#pragma once

#include <cmath>
#include <complex>

#include "cascade_lab/spectral/fft.hpp"

namespace cascade_lab::spectral {

/// Multiplier |xi|^{2 alpha}; the zero mode maps to zero.
template <std::size_t C>
Field<C> fractional_laplacian(const Field<C>& u, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be non-negative");
  return apply_radial_symbol(u, [alpha](double r) { return r == 0.0 ? 0.0 : std::pow(r, 2.0 * alpha); });
}

/// Per-mode projection I - xi xi^T / |xi|^2; the zero mode is left unchanged.
/// Nyquist modes are dropped, as in divergence and gradient.
inline VectorField leray_project(const VectorField& u) {
  auto s = to_spectrum(u);
  for_each_mode(u.grid, [&](std::size_t k, double x, double y, double z, bool nyq) {
    if (nyq) {
      for (auto& c : s) c[k] = 0.0;
      return;
    }
    const double r2 = x * x + y * y + z * z;
    if (r2 == 0.0) return;
    const std::complex<double> dot = (x * s[0][k] + y * s[1][k] + z * s[2][k]) / r2;
    s[0][k] -= x * dot;
    s[1][k] -= y * dot;
    s[2][k] -= z * dot;
  });
  auto out = from_spectrum(u.grid, s);
  out.time = u.time;
  return out;
}

/// Spectral divergence. Nyquist modes are dropped so the result stays real.
inline ScalarField divergence(const VectorField& u) {
  auto s = to_spectrum(u);
  std::array<Spectrum, 1> d{Spectrum(s[0].size())};
  const std::complex<double> I(0.0, 1.0);
  for_each_mode(u.grid, [&](std::size_t k, double x, double y, double z, bool nyq) {
    d[0][k] = nyq ? 0.0 : I * (x * s[0][k] + y * s[1][k] + z * s[2][k]);
  });
  return from_spectrum(u.grid, d);
}

inline VectorField gradient(const ScalarField& f) {
  auto s = to_spectrum(f);
  std::array<Spectrum, 3> g{Spectrum(s[0].size()), Spectrum(s[0].size()), Spectrum(s[0].size())};
  const std::complex<double> I(0.0, 1.0);
  for_each_mode(f.grid, [&](std::size_t k, double x, double y, double z, bool nyq) {
    if (nyq) return;
    g[0][k] = I * x * s[0][k];
    g[1][k] = I * y * s[0][k];
    g[2][k] = I * z * s[0][k];
  });
  return from_spectrum(f.grid, g);
}

/// (sum_xi |xi|^{2s} |u^(xi)|^2 L^3)^{1/2}, the homogeneous H^s seminorm.
template <std::size_t C>
double hs_seminorm(const Field<C>& u, double s_exp) {
  const auto s = to_spectrum(u);
  double sum = 0.0;
  for_each_mode(u.grid, [&](std::size_t k, double x, double y, double z, bool) {
    const double r2 = x * x + y * y + z * z;
    if (r2 == 0.0) return;
    double m = 0.0;
    for (const auto& comp : s) m += std::norm(comp[k]);
    sum += std::pow(r2, s_exp) * m;
  });
  return std::sqrt(sum * u.grid.volume());
}

/// ||grad u||_2 computed spectrally (all components).
template <std::size_t C>
double gradient_norm(const Field<C>& u) {
  return hs_seminorm(u, 1.0);
}

/// int |(-Delta)^{alpha/2} u|^2 = sum |xi|^{2 alpha} |u^|^2 L^3.
template <std::size_t C>
double dissipation_energy(const Field<C>& u, double alpha) {
  const double n = hs_seminorm(u, alpha);
  return n * n;
}

}  // namespace cascade_lab::spectral
