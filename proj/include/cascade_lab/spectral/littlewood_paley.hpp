#pragma once

#include <cmath>
#include <string>

#include "cascade_lab/spectral/fft.hpp"

namespace cascade_lab::spectral {

namespace detail {

inline double exp_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace detail

/// C-infinity step: 0 for x <= 0, 1 for x >= 1.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = detail::exp_tail(x);
  return a / (a + detail::exp_tail(1.0 - x));
}

inline double smoothstep_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = detail::exp_tail(x);
  const double b = detail::exp_tail(1.0 - x);
  const double da = a / (x * x);
  const double db = -b / ((1.0 - x) * (1.0 - x));
  return (da * b - a * db) / ((a + b) * (a + b));
}

/// Dyadic partition p_j(xi) = p0(2^{-j}|xi|) with p0(r) = theta(r) - theta(2r),
/// theta = 1 on [0, 4/3] and 0 on [3, inf). supp p_j = (2/3 2^j, 3 2^j).
struct LPPartition {
  static constexpr double kPlateau = 4.0 / 3.0;
  static constexpr double kCutoff = 3.0;

  int j_min = 0;
  int j_max = 0;

  static double theta(double r) {
    return 1.0 - smoothstep((r - kPlateau) / (kCutoff - kPlateau));
  }
  static double p0(double r) { return theta(r) - theta(2.0 * r); }

  [[nodiscard]] static double p(int j, double r) { return p0(std::ldexp(r, -j)); }

  /// sum_{k=-2..2} p_{j+k}, identically 1 on supp p_j.
  [[nodiscard]] static double p_tilde(int j, double r) {
    return theta(std::ldexp(r, -j - 2)) - theta(std::ldexp(r, -j + 3));
  }

  /// Bands whose support meets the nonzero grid modes, up to the last band
  /// lying inside the Nyquist sphere.
  static LPPartition for_grid(const GridSpec& g) {
    check_grid(g);
    LPPartition part;
    int j = -64;
    while (kCutoff * std::ldexp(1.0, j) <= g.xi_min()) ++j;
    part.j_min = j;
    int top = j;
    while (kCutoff * std::ldexp(1.0, top + 1) <= g.xi_nyquist()) ++top;
    part.j_max = top;
    if (part.j_max < part.j_min) throw DomainError("grid resolves no Littlewood-Paley band");
    return part;
  }

  [[nodiscard]] bool resolvable(int j) const { return j >= j_min && j <= j_max; }

  /// Upper edge of the annulus on which sum_{j_min..j_max} p_j = 1.
  [[nodiscard]] double annulus_top() const { return kPlateau * std::ldexp(1.0, j_max); }

  void require(int j) const {
    if (!resolvable(j)) {
      throw DomainError("band j=" + std::to_string(j) + " outside resolvable range [" +
                        std::to_string(j_min) + ", " + std::to_string(j_max) + "]");
    }
  }
};

/// P_j (or the widened P~_j) without the resolvability check.
template <std::size_t C>
Field<C> band_project(const Field<C>& u, int j, bool widen = false) {
  if (widen) return apply_radial_symbol(u, [j](double r) { return LPPartition::p_tilde(j, r); });
  return apply_radial_symbol(u, [j](double r) { return LPPartition::p(j, r); });
}

template <std::size_t C>
Field<C> lp_project(const Field<C>& u, int j, const LPPartition& partition, bool widen = false) {
  partition.require(j);
  return band_project(u, j, widen);
}

}  // namespace cascade_lab::spectral
