#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cascade_lab/spectral/bump.hpp"

namespace cascade_lab::regularity {

using spectral::CubeGeometry;
using spectral::GridSpec;

/// Cube at level j: corner in level-j lattice units.
struct CubeId {
  int level = 0;
  std::array<int, 3> corner{};

  auto operator<=>(const CubeId&) const = default;
};

/// Level-j cubes of nominal side box * 2^{-j(1-eps)}, snapped so an integer
/// number m_j = max(1, round(2^{j(1-eps)})) tiles each axis.
struct CubeLattice {
  GridSpec grid{64, 1.0};
  double epsilon = 0.0;
  /// Coarsest level a nuclear family may reference.
  int min_level = 0;
  /// Smallest admissible classified cube side in grid cells.
  double min_cells = 4.0;

  [[nodiscard]] int per_axis(int j) const {
    const long m = std::lround(std::exp2(j * (1.0 - epsilon)));
    return static_cast<int>(std::max(1L, m));
  }
  [[nodiscard]] double side(int j) const { return grid.box / per_axis(j); }
  [[nodiscard]] double nominal_side(int j) const { return grid.box * std::exp2(-j * (1.0 - epsilon)); }
  /// Relative deviation of the snapped side from the nominal one.
  [[nodiscard]] double snap_error(int j) const {
    if (per_axis(j) == 1 && nominal_side(j) >= grid.box) return 0.0;
    return std::abs(side(j) / nominal_side(j) - 1.0);
  }
  [[nodiscard]] std::size_t count(int j) const {
    const auto m = static_cast<std::size_t>(per_axis(j));
    return m * m * m;
  }
  [[nodiscard]] double falloff(int j) const { return std::exp2(-epsilon * j); }

  [[nodiscard]] std::size_t flat(const CubeId& q) const {
    const auto m = static_cast<std::size_t>(per_axis(q.level));
    return (static_cast<std::size_t>(q.corner[0]) * m + static_cast<std::size_t>(q.corner[1])) * m +
           static_cast<std::size_t>(q.corner[2]);
  }
  [[nodiscard]] CubeId from_flat(int j, std::size_t k) const {
    const auto m = static_cast<std::size_t>(per_axis(j));
    return {j, {static_cast<int>(k / (m * m)), static_cast<int>((k / m) % m), static_cast<int>(k % m)}};
  }

  [[nodiscard]] CubeGeometry geometry(const CubeId& q) const {
    const double s = side(q.level);
    return {{q.corner[0] * s, q.corner[1] * s, q.corner[2] * s}, s};
  }

  [[nodiscard]] spectral::Bump bump(const CubeId& q) const {
    return spectral::Bump(geometry(q), falloff(q.level), grid.box);
  }

  [[nodiscard]] bool resolved(int j) const { return side(j) >= min_cells * grid.spacing() * (1.0 - 1e-12); }
};

/// Every level-j cube, lexicographic by corner; no resolution check.
inline std::vector<CubeId> tiling(const CubeLattice& lat, int j) {
  std::vector<CubeId> out;
  out.reserve(lat.count(j));
  for (std::size_t k = 0; k < lat.count(j); ++k) out.push_back(lat.from_flat(j, k));
  return out;
}

inline std::string resolvable_region(const CubeLattice& lat) {
  int top = 0;
  while (lat.resolved(top + 1) && top < 64) ++top;
  return "levels j <= " + std::to_string(top) + " resolve cubes of >= " + std::to_string(lat.min_cells) +
         " cells at n_grid=" + std::to_string(lat.grid.n) + ", epsilon=" + std::to_string(lat.epsilon);
}

inline std::vector<CubeId> cube_hierarchy(int j, const CubeLattice& lat) {
  if (!lat.resolved(j)) {
    throw DomainError("level " + std::to_string(j) + " under-resolved: cube side " +
                      std::to_string(lat.side(j) / lat.grid.spacing()) + " cells; " + resolvable_region(lat));
  }
  return tiling(lat, j);
}

inline std::vector<CubeId> cube_hierarchy(int j, double epsilon, const GridSpec& grid) {
  CubeLattice lat;
  lat.grid = grid;
  lat.epsilon = epsilon;
  return cube_hierarchy(j, lat);
}

namespace detail {

/// Lattice indices along one axis whose open cells meet the open interval (lo, hi), wrapped.
inline std::vector<int> axis_cover(double lo, double hi, double side, int m) {
  std::vector<int> idx;
  const long first = static_cast<long>(std::floor(lo / side + 1e-12));
  const long last = static_cast<long>(std::ceil(hi / side - 1e-12)) - 1;
  if (last - first + 1 >= m) {
    for (int q = 0; q < m; ++q) idx.push_back(q);
    return idx;
  }
  for (long q = first; q <= last; ++q) idx.push_back(static_cast<int>(((q % m) + m) % m));
  return idx;
}

}  // namespace detail

/// Level-j' cubes meeting the box centered at `center` with half-width h.
template <class Visit>
void cover_box(const CubeLattice& lat, int level, const spectral::Vec3& center, double h, Visit&& visit) {
  const int m = lat.per_axis(level);
  const double s = lat.side(level);
  std::array<std::vector<int>, 3> axes;
  for (int d = 0; d < 3; ++d) axes[static_cast<std::size_t>(d)] = detail::axis_cover(center[static_cast<std::size_t>(d)] - h, center[static_cast<std::size_t>(d)] + h, s, m);
  for (int a : axes[0])
    for (int b : axes[1])
      for (int c : axes[2]) visit(CubeId{level, {a, b, c}});
}

/// Collections A_{Q,i} at levels j-2..j+2 covering (1 + 2^{-eps j}) Q.
inline std::array<std::vector<CubeId>, 5> nuclear_bands(const CubeId& q, const CubeLattice& lat) {
  const auto geo = lat.geometry(q);
  const double h = 0.5 * geo.side * (1.0 + lat.falloff(q.level));
  std::array<std::vector<CubeId>, 5> bands;
  for (int i = 0; i < 5; ++i) {
    const int level = q.level - 2 + i;
    cover_box(lat, level, geo.center(), h, [&](const CubeId& c) { bands[static_cast<std::size_t>(i)].push_back(c); });
  }
  return bands;
}

/// Deduplicating accumulator for families spanning several levels.
class FamilySet {
 public:
  explicit FamilySet(const CubeLattice& lat) : lat_(&lat) {}

  bool insert(const CubeId& q) {
    auto& st = stamps(q.level);
    auto& slot = st[lat_->flat(q)];
    if (slot == generation_) return false;
    slot = generation_;
    members_.push_back(q);
    return true;
  }

  void clear() {
    members_.clear();
    ++generation_;
  }

  [[nodiscard]] const std::vector<CubeId>& members() const { return members_; }

 private:
  std::vector<unsigned>& stamps(int level) {
    const int key = level - base_;
    if (key < 0 || static_cast<std::size_t>(key) >= table_.size()) {
      const int lo = std::min(base_, level);
      const int hi = std::max(base_ + static_cast<int>(table_.size()) - 1, level);
      std::vector<std::vector<unsigned>> fresh(static_cast<std::size_t>(hi - lo + 1));
      for (std::size_t k = 0; k < table_.size(); ++k) fresh[static_cast<std::size_t>(base_ - lo) + k] = std::move(table_[k]);
      table_ = std::move(fresh);
      base_ = lo;
    }
    auto& st = table_[static_cast<std::size_t>(level - base_)];
    if (st.empty()) st.assign(lat_->count(level), 0u);
    return st;
  }

  const CubeLattice* lat_;
  std::vector<std::vector<unsigned>> table_;
  int base_ = 0;
  unsigned generation_ = 1;
  std::vector<CubeId> members_;
};

/// N^l(Q): l-fold union of nuclear bands, deduplicated.
inline std::vector<CubeId> nuclear_family(const CubeId& q, int depth, const CubeLattice& lat) {
  if (depth < 0) throw DomainError("nuclear depth must be non-negative");
  if (q.level - 2 * depth < lat.min_level) {
    throw DomainError("nuclear family of level " + std::to_string(q.level) + " at depth " + std::to_string(depth) +
                      " underflows the coarsest level " + std::to_string(lat.min_level));
  }
  FamilySet set(lat);
  set.insert(q);
  std::size_t begin = 0;
  for (int d = 0; d < depth; ++d) {
    const std::size_t end = set.members().size();
    for (std::size_t k = begin; k < end; ++k) {
      const CubeId member = set.members()[k];
      for (const auto& band : nuclear_bands(member, lat))
        for (const auto& c : band) set.insert(c);
    }
    begin = end;
  }
  return set.members();
}

}  // namespace cascade_lab::regularity
