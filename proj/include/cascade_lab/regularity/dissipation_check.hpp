#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "cascade_lab/regularity/coefficients.hpp"
#include "cascade_lab/spectral/operators.hpp"

namespace cascade_lab::regularity {

struct LocalDissipation {
  /// <(-Delta)^alpha u, P_j phi^2 P_j u>
  double pairing = 0.0;
  /// 2^{2 alpha j} u_Q^2
  double main_term = 0.0;
  /// 2^{(2 alpha - eps) j} sum_{Q' in N^1(Q)} u_{Q'}^2
  double neighbor_term = 0.0;
  /// 2^{-100 j} ||u||_2^2
  double error_budget = 0.0;
};

/// Cube Q sets the bump; j is the band.
inline LocalDissipation local_dissipation_check(const VectorField& u, const CubeId& q, int j, double alpha,
                                                const spectral::LPPartition& partition, const CubeLattice& lat) {
  partition.require(j);
  LocalDissipation out;
  const auto pj = spectral::band_project(u, j);
  const auto phi = spectral::sample_bump(lat.bump(q), lat.grid);
  ScalarField phi2 = phi;
  for (double& v : phi2.comp[0]) v *= v;
  const auto right = spectral::band_project(spectral::multiply(phi2, pj), j);
  out.pairing = spectral::inner(spectral::fractional_laplacian(u, alpha), right);

  const double uq2 = cube_energy(energy_density(pj), lat.bump(q), lat.grid);
  out.main_term = std::exp2(2.0 * alpha * j) * uq2;

  double fam = 0.0;
  std::map<int, std::vector<double>> dens;
  for (const auto& band : nuclear_bands(q, lat))
    for (const auto& c : band) {
      auto it = dens.find(c.level);
      if (it == dens.end()) it = dens.emplace(c.level, energy_density(spectral::band_project(u, c.level))).first;
      fam += cube_energy(it->second, lat.bump(c), lat.grid);
    }
  out.neighbor_term = std::exp2((2.0 * alpha - lat.epsilon) * j) * fam;
  out.error_budget = std::exp2(-100.0 * j) * spectral::inner(u, u);
  return out;
}

/// Largest K with pairing >= K (main - neighbor) - budget on every sample
/// where main > neighbor; infinity when no sample constrains K.
inline double fit_dissipation_constant(const std::vector<LocalDissipation>& samples) {
  double k = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double gap = s.main_term - s.neighbor_term;
    if (gap > 0.0) k = std::min(k, (s.pairing + s.error_budget) / gap);
  }
  return k;
}

inline bool dissipation_bound_holds(const LocalDissipation& s, double K) {
  return s.pairing >= K * (s.main_term - s.neighbor_term) - s.error_budget;
}

}  // namespace cascade_lab::regularity
