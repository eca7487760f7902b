#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cascade_lab/regularity/cubes.hpp"

namespace cascade_lab::regularity {

/// Cube on the periodic box given by center and side.
struct PeriodicCube {
  spectral::Vec3 center{};
  double side = 0.0;
};

namespace detail {

inline double wrap(double d, double box) { return d - box * std::round(d / box); }

}  // namespace detail

/// Open interiors intersect on the torus.
inline bool overlaps(const PeriodicCube& a, const PeriodicCube& b, double box) {
  for (int d = 0; d < 3; ++d) {
    const double gap = std::abs(detail::wrap(a.center[static_cast<std::size_t>(d)] - b.center[static_cast<std::size_t>(d)], box));
    if (gap >= 0.5 * (a.side + b.side) * (1.0 - 1e-12)) return false;
  }
  return true;
}

/// Closed cube scaled by `factor` about its center contains p.
inline bool contains(const PeriodicCube& c, const spectral::Vec3& p, double box, double factor = 1.0) {
  for (int d = 0; d < 3; ++d) {
    const double half = 0.5 * c.side * factor;
    if (2.0 * half >= box) continue;
    if (std::abs(detail::wrap(p[static_cast<std::size_t>(d)] - c.center[static_cast<std::size_t>(d)], box)) > half * (1.0 + 1e-12)) return false;
  }
  return true;
}

/// Greedy selection: decreasing side, ties by the given order. Returns indices
/// of pairwise-disjoint cubes whose 5x dilations cover every input cube.
inline std::vector<std::size_t> vitali_select(const std::vector<PeriodicCube>& cubes, double box) {
  std::vector<std::size_t> order(cubes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cubes[a].side > cubes[b].side; });
  std::vector<std::size_t> chosen;
  for (std::size_t k : order) {
    bool free = true;
    for (std::size_t c : chosen) {
      if (overlaps(cubes[k], cubes[c], box)) {
        free = false;
        break;
      }
    }
    if (free) chosen.push_back(k);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

inline PeriodicCube periodic_cube(const CubeId& q, const CubeLattice& lat, double dilation = 1.0) {
  const auto g = lat.geometry(q);
  return {g.center(), std::min(g.side * dilation, lat.grid.box)};
}

/// Vitali subcollection of `cubes` after enlarging each by `dilation`; ties
/// between equal sizes break by level, then lexicographic corner.
inline std::vector<CubeId> vitali_cover(std::vector<CubeId> cubes, const CubeLattice& lat, double dilation = 1.0) {
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  std::vector<PeriodicCube> geo;
  geo.reserve(cubes.size());
  for (const auto& q : cubes) geo.push_back(periodic_cube(q, lat, dilation));
  std::vector<CubeId> out;
  for (std::size_t k : vitali_select(geo, lat.grid.box)) out.push_back(cubes[k]);
  return out;
}

/// Number of level-j cubes meeting the union of the 5x dilated selections.
inline std::size_t covering_count(const std::vector<CubeId>& selected, const CubeLattice& lat, int j, double dilation = 1.0) {
  std::vector<char> mark(lat.count(j), 0);
  std::size_t n = 0;
  for (const auto& q : selected) {
    const auto c = periodic_cube(q, lat, dilation);
    cover_box(lat, j, c.center, 2.5 * c.side, [&](const CubeId& hit) {
      auto& m = mark[lat.flat(hit)];
      if (!m) {
        m = 1;
        ++n;
      }
    });
  }
  return n;
}

}  // namespace cascade_lab::regularity
