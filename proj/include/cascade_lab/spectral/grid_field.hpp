#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "cascade_lab/error.hpp"

namespace cascade_lab::spectral {

using Vec3 = std::array<double, 3>;

/// Periodic cube [0, box)^3 sampled at n points per axis.
struct GridSpec {
  int n = 32;
  double box = 1.0;

  [[nodiscard]] std::size_t points() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  [[nodiscard]] double spacing() const { return box / n; }
  [[nodiscard]] double cell_volume() const { return std::pow(spacing(), 3); }
  [[nodiscard]] double volume() const { return box * box * box; }
  /// Smallest nonzero and Nyquist angular wavenumbers along an axis.
  [[nodiscard]] double xi_min() const { return 2.0 * std::numbers::pi / box; }
  [[nodiscard]] double xi_nyquist() const { return std::numbers::pi * n / box; }

  /// Signed wave index of FFT slot k; the Nyquist slot maps to -n/2.
  [[nodiscard]] int wave_index(int k) const { return k < n / 2 ? k : k - n; }
  [[nodiscard]] double wavenumber(int k) const { return xi_min() * wave_index(k); }
  [[nodiscard]] bool nyquist(int k) const { return k == n / 2; }

  [[nodiscard]] std::size_t flat(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * n + b) * n + c;
  }

  bool operator==(const GridSpec&) const = default;
};

inline void check_grid(const GridSpec& g) {
  if (g.n < 2 || (g.n & (g.n - 1)) != 0) throw DomainError("n_grid must be a power of two >= 2");
  if (!(g.box > 0.0) || !std::isfinite(g.box)) throw DomainError("box size must be positive");
}

/// C real components on a periodic grid (C-order, last axis fastest).
template <std::size_t C>
struct Field {
  GridSpec grid;
  std::array<std::vector<double>, C> comp;
  std::optional<double> time;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g) {
    check_grid(g);
    for (auto& c : comp) c.assign(g.points(), 0.0);
  }

  static constexpr std::size_t components = C;

  [[nodiscard]] bool finite() const {
    for (const auto& c : comp)
      for (double v : c)
        if (!std::isfinite(v)) return false;
    return true;
  }

  Field& operator+=(const Field& o) {
    for (std::size_t d = 0; d < C; ++d)
      for (std::size_t k = 0; k < comp[d].size(); ++k) comp[d][k] += o.comp[d][k];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t d = 0; d < C; ++d)
      for (std::size_t k = 0; k < comp[d].size(); ++k) comp[d][k] -= o.comp[d][k];
    return *this;
  }
  Field& operator*=(double s) {
    for (auto& c : comp)
      for (double& v : c) v *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
};

using VectorField = Field<3>;
using ScalarField = Field<1>;

/// Grid quadrature of int u.v dx.
template <std::size_t C>
double inner(const Field<C>& u, const Field<C>& v) {
  double sum = 0.0;
  for (std::size_t d = 0; d < C; ++d)
    for (std::size_t k = 0; k < u.comp[d].size(); ++k) sum += u.comp[d][k] * v.comp[d][k];
  return sum * u.grid.cell_volume();
}

template <std::size_t C>
double l2_norm(const Field<C>& u) {
  return std::sqrt(inner(u, u));
}

/// (int |u|^q dx)^{1/q} with |u| the pointwise Euclidean norm; q = inf gives max |u|.
template <std::size_t C>
double lq_norm(const Field<C>& u, double q) {
  const std::size_t pts = u.grid.points();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t k = 0; k < pts; ++k) {
      double s = 0.0;
      for (std::size_t d = 0; d < C; ++d) s += u.comp[d][k] * u.comp[d][k];
      m = std::max(m, s);
    }
    return std::sqrt(m);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < pts; ++k) {
    double s = 0.0;
    for (std::size_t d = 0; d < C; ++d) s += u.comp[d][k] * u.comp[d][k];
    sum += std::pow(s, 0.5 * q);
  }
  return std::pow(sum * u.grid.cell_volume(), 1.0 / q);
}

/// Grid quadrature of int u dx, per component.
template <std::size_t C>
std::array<double, C> integral(const Field<C>& u) {
  std::array<double, C> out{};
  for (std::size_t d = 0; d < C; ++d) {
    double s = 0.0;
    for (double v : u.comp[d]) s += v;
    out[d] = s * u.grid.cell_volume();
  }
  return out;
}

/// Pointwise product of a scalar weight with every component.
template <std::size_t C>
Field<C> multiply(const ScalarField& w, Field<C> u) {
  for (auto& c : u.comp)
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= w.comp[0][k];
  return u;
}

}  // namespace cascade_lab::spectral
