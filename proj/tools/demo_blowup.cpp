// Inviscid dyadic cascade on 12 shells: prints the energy front as it runs toward the guard.
#include <cstdio>

#include "cascade_lab/cascade/builders.hpp"
#include "cascade_lab/cascade/diagnostics.hpp"
#include "cascade_lab/cascade/integrator.hpp"

int main() {
  using namespace cascade_lab::cascade;
  const auto config = builtin_dyadic_config(2.0, 1.0, {0, 11}, 0.0);
  CascadeState x0(config.shells, 0.0);
  x0.at(1, 0) = 1.0;
  IntegratorOptions opt;
  opt.guard_factor = 1e2;
  opt.h_min = 1e-6;
  const auto tr = integrate(config, x0, 2.0, opt);

  std::printf("%10s %8s %14s %14s\n", "t", "front", "energy", "weighted");
  const std::size_t stride = std::max<std::size_t>(1, tr.samples.size() / 25);
  for (std::size_t k = 0; k < tr.samples.size(); k += stride) {
    const auto& s = tr.samples[k];
    std::printf("%10.6f %8d %14.10f %14.6e\n", s.time(), dominant_shell(s), total_energy(s),
                energy_weighted_norm(s, config.lambda));
  }
  const auto& last = tr.samples.back();
  std::printf("%10.6f %8d %14.10f %14.6e\n", last.time(), dominant_shell(last), total_energy(last),
              energy_weighted_norm(last, config.lambda));
  std::printf("status %s", std::string(to_string(tr.status)).c_str());
  if (tr.blowup_time_estimate) std::printf(", blowup time estimate %.6f", *tr.blowup_time_estimate);
  std::printf(" (%zu samples)\n", tr.samples.size());
}
