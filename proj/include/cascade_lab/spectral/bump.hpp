#pragma once

#include <cmath>

#include "cascade_lab/spectral/grid_field.hpp"
#include "cascade_lab/spectral/littlewood_paley.hpp"

namespace cascade_lab::spectral {

/// Axis-aligned cube [lo, lo + side)^3 on the periodic box.
struct CubeGeometry {
  Vec3 lo{};
  double side = 1.0;
  [[nodiscard]] Vec3 center() const { return {lo[0] + 0.5 * side, lo[1] + 0.5 * side, lo[2] + 0.5 * side}; }
};

/// Tensor-product cutoff: 1 on the cube, 0 outside the cube dilated by
/// (1 + falloff) about its center, smoothstep in between.
class Bump {
 public:
  Bump(const CubeGeometry& cube, double falloff, double box) : cube_(cube), box_(box) {
    if (!(falloff > 0.0)) throw DomainError("bump falloff must be positive");
    whole_ = std::abs(cube.side - box) <= 1e-12 * box;
    half_ = 0.5 * cube.side;
    width_ = half_ * falloff;
    if (!whole_ && 2.0 * (half_ + width_) > box * (1.0 + 1e-12)) {
      throw DomainError("bump support exceeds the periodic box");
    }
  }

  [[nodiscard]] bool whole_box() const { return whole_; }
  [[nodiscard]] double support_half_width() const { return half_ + width_; }
  [[nodiscard]] double transition_width() const { return width_; }

  /// Minimum-image offset from the cube center along axis d.
  [[nodiscard]] double offset(double x, int d) const {
    double y = x - cube_.center()[static_cast<std::size_t>(d)];
    y -= box_ * std::round(y / box_);
    return y;
  }

  [[nodiscard]] double profile(double y) const {
    if (whole_) return 1.0;
    return 1.0 - smoothstep((std::abs(y) - half_) / width_);
  }

  [[nodiscard]] double profile_derivative(double y) const {
    if (whole_) return 0.0;
    const double s = y < 0.0 ? -1.0 : 1.0;
    return -s * smoothstep_derivative((std::abs(y) - half_) / width_) / width_;
  }

  [[nodiscard]] double operator()(const Vec3& x) const {
    return profile(offset(x[0], 0)) * profile(offset(x[1], 1)) * profile(offset(x[2], 2));
  }

  /// sup |grad phi|, attained on a face transition where the other factors equal 1.
  [[nodiscard]] double gradient_max(int probes = 4096) const {
    if (whole_) return 0.0;
    double m = 0.0;
    for (int k = 0; k <= probes; ++k) {
      const double y = half_ + width_ * k / probes;
      m = std::max(m, std::abs(profile_derivative(y)));
    }
    return m;
  }

  [[nodiscard]] const CubeGeometry& cube() const { return cube_; }

 private:
  CubeGeometry cube_;
  double box_;
  bool whole_ = false;
  double half_ = 0.5;
  double width_ = 0.0;
};

inline ScalarField sample_bump(const Bump& phi, const GridSpec& g) {
  ScalarField f(g);
  const double h = g.spacing();
  std::vector<double> wx(static_cast<std::size_t>(g.n)), wy(wx.size()), wz(wx.size());
  for (int a = 0; a < g.n; ++a) {
    wx[static_cast<std::size_t>(a)] = phi.profile(phi.offset(a * h, 0));
    wy[static_cast<std::size_t>(a)] = phi.profile(phi.offset(a * h, 1));
    wz[static_cast<std::size_t>(a)] = phi.profile(phi.offset(a * h, 2));
  }
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int c = 0; c < g.n; ++c)
        f.comp[0][g.flat(a, b, c)] =
            wx[static_cast<std::size_t>(a)] * wy[static_cast<std::size_t>(b)] * wz[static_cast<std::size_t>(c)];
  return f;
}

}  // namespace cascade_lab::spectral
