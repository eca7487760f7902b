#pragma once

// Right-hand side of the truncated cascade system
//
//   dX_{i,n}/dt = sum a_{i1,i2,i,mu} lambda^{5(n-mu3)/2} X_{i1,n-mu3+mu1} X_{i2,n-mu3+mu2}
//                 - kappa lambda^{2 alpha n} X_{i,n}
//
// Truncation: a (key, base shell) term is kept only when all three shells it
// touches are inside the range. All keys of one cancellation group touch the
// same shells, so groups are kept or dropped as a whole and the quadratic
// part conserves energy exactly.

#include <cmath>
#include <span>
#include <vector>

#include "cascade_lab/cascade/config.hpp"
#include "cascade_lab/cascade/state.hpp"

namespace cascade_lab::cascade {

class CascadeSystem {
 public:
  struct Term {
    std::size_t out;
    std::size_t in1;
    std::size_t in2;
    double coefficient;  // a * lambda^{5m/2}
  };

  CascadeSystem(const CoefficientTensor& tensor, double lambda, ShellRange shells,
                double alpha = 0.0, double kappa = 0.0)
      : shells_(shells), size_(static_cast<std::size_t>(kSpeciesCount * shells.count())) {
    const auto idx = [&](const Leg& leg, int m) {
      return static_cast<std::size_t>((leg.species - 1) * shells.count() +
                                      (m + leg.offset - shells.first));
    };
    for (const auto& [key, value] : tensor.entries()) {
      if (value == 0.0) continue;
      // Base shells m with m+offset touching the range at all.
      for (int m = shells.first - 1; m <= shells.last; ++m) {
        bool all_in = true;
        bool any_in = false;
        for (const auto& leg : key.legs) {
          const bool in = shells.contains(m + leg.offset);
          all_in = all_in && in;
          any_in = any_in || in;
        }
        if (!all_in) {
          if (any_in) ++dropped_;
          continue;
        }
        terms_.push_back({idx(key.legs[2], m), idx(key.legs[0], m), idx(key.legs[1], m),
                          value * std::pow(lambda, 2.5 * m)});
      }
    }
    damping_.assign(size_, 0.0);
    for (int i = 1; i <= kSpeciesCount; ++i) {
      for (int n = shells.first; n <= shells.last; ++n) {
        damping_[static_cast<std::size_t>((i - 1) * shells.count() + (n - shells.first))] =
            kappa * std::pow(lambda, 2.0 * alpha * n);
      }
    }
  }

  explicit CascadeSystem(const CascadeConfig& config)
      : CascadeSystem(config.tensor, config.lambda, config.shells, config.alpha, config.kappa) {}

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] ShellRange shells() const { return shells_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  /// Number of (key, base shell) terms removed because they straddle the range boundary.
  [[nodiscard]] std::size_t dropped_terms() const { return dropped_; }
  /// Diagonal damping rates kappa * lambda^{2 alpha n}, same layout as the state.
  [[nodiscard]] const std::vector<double>& damping() const { return damping_; }

  /// out = B(x, y): coefficient-space cascade operator.
  void bilinear(std::span<const double> x, std::span<const double> y,
                std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& t : terms_) out[t.out] += t.coefficient * x[t.in1] * y[t.in2];
  }

  void quadratic(std::span<const double> x, std::span<double> out) const { bilinear(x, x, out); }

  void rhs(std::span<const double> x, std::span<double> out) const {
    quadratic(x, out);
    for (std::size_t k = 0; k < size_; ++k) out[k] -= damping_[k] * x[k];
  }

  /// sum_k x_k * quadratic(x)_k
  [[nodiscard]] double flux(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t.coefficient * x[t.in1] * x[t.in2] * x[t.out];
    return sum;
  }

  /// sum_k damping_k x_k^2, the instantaneous dissipation rate of total energy.
  [[nodiscard]] double dissipation(std::span<const double> x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < size_; ++k) sum += damping_[k] * x[k] * x[k];
    return sum;
  }

 private:
  ShellRange shells_;
  std::size_t size_;
  std::vector<Term> terms_;
  std::vector<double> damping_;
  std::size_t dropped_ = 0;
};

inline std::vector<double> cascade_rhs(const CascadeState& state, const CascadeConfig& config) {
  if (state.shells() != config.shells) throw DomainError("state shell range differs from config");
  const CascadeSystem system(config);
  std::vector<double> out(system.size());
  system.rhs(state.values(), out);
  return out;
}

inline std::vector<double> cascade_quadratic(const CascadeState& state,
                                             const CascadeConfig& config) {
  if (state.shells() != config.shells) throw DomainError("state shell range differs from config");
  const CascadeSystem system(config);
  std::vector<double> out(system.size());
  system.quadratic(state.values(), out);
  return out;
}

inline double nonlinear_energy_flux(const CascadeState& state, const CascadeConfig& config) {
  if (state.shells() != config.shells) throw DomainError("state shell range differs from config");
  return CascadeSystem(config).flux(state.values());
}

}  // namespace cascade_lab::cascade
