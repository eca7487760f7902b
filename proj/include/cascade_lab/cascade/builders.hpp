#pragma once

#include <random>

#include "cascade_lab/cascade/config.hpp"

namespace cascade_lab::cascade {

/// Adds one cancellation group coupling legs a, b, c. weight_x is the value
/// given to the placements whose output leg is x (mirrored over the inputs).
/// Weights are adjusted so the six-permutation sum vanishes:
/// distinct legs need wa + wb + wc = 0; for {a, a, c} the relation is
/// 2 wa + wc = 0 and wb is ignored; a fully repeated leg admits no coupling.
inline void add_cancelling_group(CoefficientTensor& tensor, Leg a, Leg b, Leg c, double wa,
                                 double wb, double wc) {
  if (a == b && b == c) return;
  if (a == b || b == c || a == c) {
    // Normalize to the pattern {p, p, q}.
    Leg p = a, q = c;
    double wp = wa;
    if (a == c) {
      q = b;
    } else if (b == c) {
      p = b;
      q = a;
      wp = wb;
    }
    tensor.set_symmetric(p, q, p, wp);
    tensor.set(TensorKey{{p, p, q}}, -2.0 * wp);
    return;
  }
  tensor.set_symmetric(b, c, a, wa);
  tensor.set_symmetric(a, c, b, wb);
  tensor.set_symmetric(a, b, c, wc);
}

/// Tensor whose species-1 slice is the classical dyadic cascade
///   dX_n/dt = lambda^{5(n-1)/2} X_{n-1}^2 - lambda^{5n/2} X_n X_{n+1}.
inline CoefficientTensor dyadic_tensor() {
  CoefficientTensor tensor;
  const Leg low{1, 0};
  const Leg high{1, 1};
  tensor.set(TensorKey{{low, low, high}}, 1.0);
  tensor.set_symmetric(low, high, low, -0.5);
  return tensor;
}

inline CascadeConfig builtin_dyadic_config(double lambda, double alpha, ShellRange shells,
                                           double kappa = 1.0) {
  if (shells.count() <= 0) throw DomainError("empty shell range");
  CascadeConfig config{lambda, alpha, shells, kappa, dyadic_tensor()};
  check_config(config);
  return config;
}

/// Random tensor satisfying symmetry and cancellation, built from `groups`
/// random cancellation groups with weights in [-1, 1].
template <class Rng>
CoefficientTensor random_valid_tensor(Rng& rng, int groups) {
  std::uniform_int_distribution<int> species(1, kSpeciesCount);
  std::uniform_int_distribution<int> pattern(0, 3);  // which leg (if any) carries offset 1
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  CoefficientTensor tensor;
  for (int g = 0; g < groups; ++g) {
    std::array<Leg, 3> legs{Leg{species(rng), 0}, Leg{species(rng), 0}, Leg{species(rng), 0}};
    const int p = pattern(rng);
    if (p > 0) legs[static_cast<std::size_t>(p - 1)].offset = 1;
    const double wa = weight(rng);
    const double wb = weight(rng);
    CoefficientTensor group;
    add_cancelling_group(group, legs[0], legs[1], legs[2], wa, wb, -wa - wb);
    for (const auto& [key, value] : group.entries()) tensor.add(key, value);
  }
  return tensor;
}

}  // namespace cascade_lab::cascade
