#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cascade_lab/cascade/state.hpp"
#include "cascade_lab/spectral/fft.hpp"

namespace cascade_lab::spectral {

using cascade::CascadeState;
using cascade::ShellRange;
using cascade::kSpeciesCount;

struct BasisSpec {
  double lambda = 2.0;
  GridSpec grid{64, 1.0};
  ShellRange shells{3, 7};
  /// Ball-center radius at unit scale; negative selects the annulus midpoint.
  double center_radius = -1.0;
  /// Ball radius as a fraction of the largest radius fitting the annulus.
  double radius_fraction = 0.95;
};

struct BasisMode {
  std::size_t flat;
  Vec3 value;  // real, even symbol
};

struct ShellRealization {
  std::vector<BasisMode> modes;
  /// Riemann sum of |psi^_i(lambda^{-n} xi)|^2 over the grid divided by the
  /// continuum integral, before discrete renormalization.
  double quadrature_ratio = 0.0;
};

class WaveletBasis {
 public:
  double lambda = 2.0;
  GridSpec grid;
  ShellRange shells;
  std::array<Vec3, 4> centers{};
  std::array<Vec3, 4> polarization{};
  double ball_radius = 0.0;
  std::vector<ShellRealization> realized;  // [(i-1)*count + n-first]

  [[nodiscard]] const ShellRealization& shell(int i, int n) const {
    return realized[static_cast<std::size_t>((i - 1) * shells.count() + (n - shells.first))];
  }

  [[nodiscard]] double annulus_inner() const { return 1.0; }
  [[nodiscard]] double annulus_outer() const { return 0.5 * (lambda + 1.0); }

  [[nodiscard]] double max_quadrature_error() const {
    double e = 0.0;
    for (const auto& s : realized) e = std::max(e, std::abs(s.quadrature_ratio - 1.0));
    return e;
  }

  [[nodiscard]] std::string id() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "wavelet-l%.6g-n%d-L%.6g-s%d_%d-r%.6g", lambda, grid.n, grid.box,
                  shells.first, shells.last, ball_radius);
    return buf;
  }

  /// Unscaled symbol psi^_i at xi (unit-scale coordinates).
  [[nodiscard]] Vec3 symbol(int i, const Vec3& xi) const {
    const auto& c = centers[static_cast<std::size_t>(i - 1)];
    const auto& v = polarization[static_cast<std::size_t>(i - 1)];
    const double amp = bump(dist(xi, c) / ball_radius) + bump(dist(xi, Vec3{-c[0], -c[1], -c[2]}) / ball_radius);
    if (amp == 0.0) return {0.0, 0.0, 0.0};
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double dot = (xi[0] * v[0] + xi[1] * v[1] + xi[2] * v[2]) / r2;
    return {amp * (v[0] - dot * xi[0]), amp * (v[1] - dot * xi[1]), amp * (v[2] - dot * xi[2])};
  }

  static double bump(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

  static double dist(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                     (a[2] - b[2]) * (a[2] - b[2]));
  }
};

namespace detail {

/// Continuum integral of |psi^_i|^2 by a fine midpoint rule over the two balls.
inline double continuum_norm2(const WaveletBasis& b, int i) {
  constexpr int m = 48;
  const auto& c = b.centers[static_cast<std::size_t>(i - 1)];
  const double h = 2.0 * b.ball_radius / m;
  double sum = 0.0;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      for (int z = 0; z < m; ++z) {
        const Vec3 xi{c[0] - b.ball_radius + (x + 0.5) * h, c[1] - b.ball_radius + (y + 0.5) * h,
                      c[2] - b.ball_radius + (z + 0.5) * h};
        const auto v = b.symbol(i, xi);
        sum += v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      }
  return 2.0 * sum * h * h * h;
}

}  // namespace detail

inline WaveletBasis build_wavelet_basis(const BasisSpec& spec) {
  check_grid(spec.grid);
  if (!(spec.lambda > 1.0 && spec.lambda <= 2.0)) throw DomainError("basis lambda must satisfy 1 < lambda <= 2");
  if (spec.shells.count() <= 0) throw DomainError("empty basis shell window");

  WaveletBasis b;
  b.lambda = spec.lambda;
  b.grid = spec.grid;
  b.shells = spec.shells;
  const double outer = b.annulus_outer();
  const double r0 = spec.center_radius > 0.0 ? spec.center_radius : 0.5 * (1.0 + outer);
  b.ball_radius = spec.radius_fraction * 0.25 * (spec.lambda - 1.0);
  if (!(b.ball_radius > 0.0)) throw DomainError("ball radius must be positive");
  if (r0 - b.ball_radius < 1.0 || r0 + b.ball_radius > outer) {
    throw DomainError("wavelet balls do not fit inside the annulus 1 < |xi| <= (lambda+1)/2");
  }

  // Cube-vertex directions: the eight +-copies are the vertices of a cube.
  const double s = 1.0 / std::sqrt(3.0);
  const std::array<Vec3, 4> dirs{Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}};
  for (int i = 0; i < 4; ++i) {
    const auto& d = dirs[static_cast<std::size_t>(i)];
    b.centers[static_cast<std::size_t>(i)] = {r0 * d[0], r0 * d[1], r0 * d[2]};
    Vec3 v{d[1], -d[0], 0.0};
    const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1]);
    b.polarization[static_cast<std::size_t>(i)] = {v[0] / nv, v[1] / nv, 0.0};
  }
  for (int i = 0; i < 8; ++i) {
    for (int k = i + 1; k < 8; ++k) {
      const auto& ci = b.centers[static_cast<std::size_t>(i % 4)];
      const auto& ck = b.centers[static_cast<std::size_t>(k % 4)];
      const double si = i < 4 ? 1.0 : -1.0;
      const double sk = k < 4 ? 1.0 : -1.0;
      const Vec3 a{si * ci[0], si * ci[1], si * ci[2]};
      const Vec3 c{sk * ck[0], sk * ck[1], sk * ck[2]};
      if (WaveletBasis::dist(a, c) <= 2.0 * b.ball_radius) throw DomainError("wavelet balls overlap");
    }
  }

  const auto& g = spec.grid;
  const double top = std::pow(spec.lambda, spec.shells.last) * (r0 + b.ball_radius);
  if (top > g.xi_nyquist()) {
    throw DomainError("shell " + std::to_string(spec.shells.last) + " exceeds the grid Nyquist wavenumber");
  }

  std::array<double, 4> cont{};
  for (int i = 1; i <= 4; ++i) cont[static_cast<std::size_t>(i - 1)] = detail::continuum_norm2(b, i);

  b.realized.resize(static_cast<std::size_t>(kSpeciesCount * spec.shells.count()));
  const double dxi3 = std::pow(g.xi_min(), 3);
  for (int n = spec.shells.first; n <= spec.shells.last; ++n) {
    const double scale = std::pow(spec.lambda, -n);
    const double lo = std::pow(spec.lambda, n) * (r0 - b.ball_radius);
    const double hi = std::pow(spec.lambda, n) * (r0 + b.ball_radius);
    std::array<std::vector<BasisMode>, 4> modes;
    for_each_mode(g, [&](std::size_t k, double x, double y, double z, bool) {
      const double r = std::sqrt(x * x + y * y + z * z);
      if (r <= lo || r >= hi) return;
      const Vec3 xi{x * scale, y * scale, z * scale};
      for (int i = 1; i <= 4; ++i) {
        const auto v = b.symbol(i, xi);
        if (v[0] != 0.0 || v[1] != 0.0 || v[2] != 0.0) modes[static_cast<std::size_t>(i - 1)].push_back({k, v});
      }
    });
    for (int i = 1; i <= 4; ++i) {
      auto& list = modes[static_cast<std::size_t>(i - 1)];
      if (list.empty()) {
        throw DomainError("grid resolves no modes for species " + std::to_string(i) + " shell " +
                          std::to_string(n));
      }
      double norm2 = 0.0;
      for (const auto& m : list) norm2 += m.value[0] * m.value[0] + m.value[1] * m.value[1] + m.value[2] * m.value[2];
      auto& real = b.realized[static_cast<std::size_t>((i - 1) * spec.shells.count() + (n - spec.shells.first))];
      real.quadrature_ratio = norm2 * dxi3 * std::pow(scale, 3) / cont[static_cast<std::size_t>(i - 1)];
      const double inv = 1.0 / std::sqrt(norm2 * g.volume());
      for (auto& m : list)
        for (double& c : m.value) c *= inv;
      real.modes = std::move(list);
    }
  }
  return b;
}

inline void require_window(const WaveletBasis& b, ShellRange shells) {
  if (shells.first < b.shells.first || shells.last > b.shells.last) {
    throw DomainError("shell range [" + std::to_string(shells.first) + ", " + std::to_string(shells.last) +
                      "] outside basis window [" + std::to_string(b.shells.first) + ", " +
                      std::to_string(b.shells.last) + "]");
  }
}

/// Spectrum of sum X_{i,n} psi_{i,n}.
inline std::array<Spectrum, 3> synthesize_spectrum(const CascadeState& state, const WaveletBasis& b) {
  require_window(b, state.shells());
  std::array<Spectrum, 3> s;
  for (auto& c : s) c.assign(b.grid.points(), {0.0, 0.0});
  const auto sh = state.shells();
  for (int i = 1; i <= kSpeciesCount; ++i) {
    for (int n = sh.first; n <= sh.last; ++n) {
      const double x = state.at(i, n);
      if (x == 0.0) continue;
      for (const auto& m : b.shell(i, n).modes)
        for (int d = 0; d < 3; ++d) s[static_cast<std::size_t>(d)][m.flat] += x * m.value[static_cast<std::size_t>(d)];
    }
  }
  return s;
}

inline VectorField synthesize_field(const CascadeState& state, const WaveletBasis& b) {
  auto u = from_spectrum(b.grid, synthesize_spectrum(state, b));
  u.time = state.time();
  return u;
}

/// <u, psi_{i,n}> from a precomputed spectrum of u.
inline double project_coefficient(const std::array<Spectrum, 3>& s, const WaveletBasis& b, int i, int n) {
  double sum = 0.0;
  for (const auto& m : b.shell(i, n).modes)
    for (int d = 0; d < 3; ++d) sum += s[static_cast<std::size_t>(d)][m.flat].real() * m.value[static_cast<std::size_t>(d)];
  return sum * b.grid.volume();
}

/// Coefficients X_{i,n} = <u, psi_{i,n}> over `shells` (default: whole window).
inline CascadeState project_state(const VectorField& u, const WaveletBasis& b, std::optional<ShellRange> shells = {}) {
  if (!(u.grid == b.grid)) throw DomainError("field grid differs from basis grid");
  const ShellRange sh = shells.value_or(b.shells);
  require_window(b, sh);
  const auto s = to_spectrum(u);
  CascadeState x(sh, u.time.value_or(0.0));
  for (int i = 1; i <= kSpeciesCount; ++i)
    for (int n = sh.first; n <= sh.last; ++n) x.at(i, n) = project_coefficient(s, b, i, n);
  return x;
}

/// psi_{i,n} on the grid.
inline VectorField basis_profile(const WaveletBasis& b, int i, int n) {
  CascadeState x(ShellRange{n, n});
  x.at(i, n) = 1.0;
  return synthesize_field(x, b);
}

}  // namespace cascade_lab::spectral
