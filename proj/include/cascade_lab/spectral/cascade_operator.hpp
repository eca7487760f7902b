#pragma once

#include <cmath>

#include "cascade_lab/cascade/system.hpp"
#include "cascade_lab/spectral/littlewood_paley.hpp"
#include "cascade_lab/spectral/wavelet_basis.hpp"

namespace cascade_lab::spectral {

struct CascadeOperatorResult {
  VectorField field;
  /// (key, base shell) terms removed because they leave the basis window.
  std::size_t dropped_terms = 0;
};

/// Grid realization of C(u, v) = sum a lambda^{5m/2} <u,psi_{i1,m+mu1}> <v,psi_{i2,m+mu2}> psi_{i3,m+mu3}
/// over the basis window.
inline CascadeOperatorResult apply_cascade_operator(const VectorField& u, const VectorField& v,
                                                    const cascade::CoefficientTensor& tensor,
                                                    const WaveletBasis& basis) {
  const cascade::CascadeSystem sys(tensor, basis.lambda, basis.shells);
  const auto x = project_state(u, basis);
  const auto y = project_state(v, basis);
  CascadeState out(basis.shells, u.time.value_or(0.0));
  sys.bilinear(x.values(), y.values(), out.values());
  return {synthesize_field(out, basis), sys.dropped_terms()};
}

struct ParaproductParts {
  VectorField lh, hl, hh, loc;
};

/// Frequency band index of shell n: floor(n log2 lambda).
inline int shell_band(int n, double lambda) {
  return static_cast<int>(std::floor(n * std::log2(lambda) + 1e-9));
}

/// Splits P_j C(u, u) by the bands (b1, b2) of the two input shells:
/// low means b < j - width, high means b > j + width.
///   lh: first input low; hl: first not low, second low; hh: both high; loc: the rest.
inline ParaproductParts paraproduct_split(const VectorField& u, const cascade::CoefficientTensor& tensor,
                                          const WaveletBasis& basis, int j, int width) {
  if (width < 1) throw DomainError("paraproduct width must be >= 1");
  const cascade::CascadeSystem sys(tensor, basis.lambda, basis.shells);
  const auto x = project_state(u, basis);
  const auto sh = basis.shells;
  const int count = sh.count();
  auto band_of = [&](std::size_t idx) { return shell_band(sh.first + static_cast<int>(idx) % count, basis.lambda); };

  std::array<CascadeState, 4> parts{CascadeState(sh), CascadeState(sh), CascadeState(sh), CascadeState(sh)};
  const auto xv = x.values();
  for (const auto& t : sys.terms()) {
    const int b1 = band_of(t.in1);
    const int b2 = band_of(t.in2);
    const bool low1 = b1 < j - width, low2 = b2 < j - width;
    const bool high1 = b1 > j + width, high2 = b2 > j + width;
    int regime = 3;
    if (low1) regime = 0;
    else if (low2) regime = 1;
    else if (high1 && high2) regime = 2;
    parts[static_cast<std::size_t>(regime)].values()[t.out] += t.coefficient * xv[t.in1] * xv[t.in2];
  }
  auto realize = [&](const CascadeState& s) { return band_project(synthesize_field(s, basis), j); };
  return {realize(parts[0]), realize(parts[1]), realize(parts[2]), realize(parts[3])};
}

}  // namespace cascade_lab::spectral
