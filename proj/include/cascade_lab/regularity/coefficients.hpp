#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cascade_lab/regularity/cubes.hpp"
#include "cascade_lab/spectral/littlewood_paley.hpp"

namespace cascade_lab::regularity {

using spectral::ScalarField;
using spectral::VectorField;

namespace detail {

/// Grid indices along axis d where the bump profile is nonzero, with the profile value.
inline std::vector<std::pair<int, double>> axis_weights(const spectral::Bump& phi, int d, const GridSpec& g) {
  std::vector<std::pair<int, double>> w;
  const double h = g.spacing();
  const double c = phi.cube().center()[static_cast<std::size_t>(d)];
  const double H = phi.whole_box() ? g.box : phi.support_half_width();
  long lo = static_cast<long>(std::ceil((c - H) / h));
  long hi = static_cast<long>(std::floor((c + H) / h));
  if (hi - lo + 1 >= g.n) {
    lo = 0;
    hi = g.n - 1;
  }
  for (long k = lo; k <= hi; ++k) {
    const int idx = static_cast<int>(((k % g.n) + g.n) % g.n);
    const double v = phi.profile(phi.offset(idx * h, d));
    if (v != 0.0) w.emplace_back(idx, v);
  }
  return w;
}

}  // namespace detail

/// Pointwise |u|^2.
template <std::size_t C>
std::vector<double> energy_density(const spectral::Field<C>& u) {
  std::vector<double> e(u.grid.points(), 0.0);
  for (const auto& comp : u.comp)
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += comp[k] * comp[k];
  return e;
}

/// int phi^2 density dx by grid quadrature.
inline double cube_energy(const std::vector<double>& density, const spectral::Bump& phi, const GridSpec& g) {
  const auto wx = detail::axis_weights(phi, 0, g);
  const auto wy = detail::axis_weights(phi, 1, g);
  const auto wz = detail::axis_weights(phi, 2, g);
  double sum = 0.0;
  for (const auto& [a, va] : wx)
    for (const auto& [b, vb] : wy) {
      const double vab = va * vb;
      double inner = 0.0;
      for (const auto& [c, vc] : wz) inner += vc * vc * density[g.flat(a, b, c)];
      sum += vab * vab * inner;
    }
  return sum * g.cell_volume();
}

/// int phi_Q^2 density for every cube of the level, indexed by lattice flat id.
/// Axis weights depend only on the lattice coordinate, so they are shared.
inline std::vector<double> level_energies(const std::vector<double>& density, int level, const CubeLattice& lat) {
  const int m = lat.per_axis(level);
  const auto& g = lat.grid;
  std::vector<std::vector<std::pair<int, double>>> w(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) {
    auto list = detail::axis_weights(lat.bump(CubeId{level, {q, q, q}}), 0, g);
    for (auto& e : list) e.second *= e.second;
    w[static_cast<std::size_t>(q)] = std::move(list);
  }
  std::vector<double> out(lat.count(level));
  std::vector<double> plane;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      // Partial sums over (x, y) for this column of cubes, then contract with z weights.
      plane.assign(static_cast<std::size_t>(g.n), 0.0);
      for (const auto& [x, vx] : w[static_cast<std::size_t>(a)])
        for (const auto& [y, vy] : w[static_cast<std::size_t>(b)]) {
          const double v = vx * vy;
          const std::size_t base = g.flat(x, y, 0);
          for (int z = 0; z < g.n; ++z) plane[static_cast<std::size_t>(z)] += v * density[base + static_cast<std::size_t>(z)];
        }
      for (int c = 0; c < m; ++c) {
        double sum = 0.0;
        for (const auto& [z, vz] : w[static_cast<std::size_t>(c)]) sum += vz * plane[static_cast<std::size_t>(z)];
        out[(static_cast<std::size_t>(a) * m + b) * m + c] = sum * g.cell_volume();
      }
    }
  }
  return out;
}

/// u_Q = || phi_{Q,j} P_j u ||_2
inline double wavelet_coefficient(const VectorField& u, const CubeId& q, int j, const spectral::LPPartition& partition,
                                  const CubeLattice& lat) {
  partition.require(j);
  const auto band = spectral::band_project(u, j);
  return std::sqrt(cube_energy(energy_density(band), lat.bump(q), lat.grid));
}

}  // namespace cascade_lab::regularity
