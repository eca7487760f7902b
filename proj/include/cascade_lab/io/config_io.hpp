#pragma once

#include <vector>

#include "cascade_lab/cascade/builders.hpp"
#include "cascade_lab/cascade/integrator.hpp"
#include "cascade_lab/io/common.hpp"
#include "cascade_lab/regularity/badness.hpp"
#include "cascade_lab/spectral/wavelet_basis.hpp"

namespace cascade_lab::io {

struct SimulationConfig {
  cascade::CascadeConfig cascade;
  std::vector<std::array<double, 3>> initial;  // (i, n, value)
  double t_end = 1.0;
  cascade::IntegratorOptions integrator;
  bool builtin_tensor = false;
};

/// Parses without validating the tensor constraints (that is run_validate's job).
inline SimulationConfig parse_simulation_config(const json& j, const std::string& origin) {
  check_schema(j, origin);
  SimulationConfig c;
  auto& cc = c.cascade;
  cc.lambda = require<double>(j, "lambda", origin);
  cc.alpha = require<double>(j, "alpha", origin);
  cc.kappa = get_or<double>(j, "kappa", 1.0, origin);
  cc.shells = {require<int>(j, "n_min", origin), require<int>(j, "n_max", origin)};
  if (!j.contains("tensor")) throw InputError(origin + ": missing field 'tensor'");
  const auto& t = j["tensor"];
  if (t.is_string()) {
    if (t != "dyadic") throw InputError(origin + ": unknown builtin tensor '" + t.get<std::string>() + "'");
    cc.tensor = cascade::dyadic_tensor();
    c.builtin_tensor = true;
  } else if (t.is_array()) {
    for (const auto& row : t) {
      if (!row.is_array() || row.size() != 7) throw InputError(origin + ": tensor rows must be [i1,i2,i3,mu1,mu2,mu3,value]");
      std::array<int, 6> k{};
      for (std::size_t q = 0; q < 6; ++q) {
        if (!row[q].is_number_integer()) throw InputError(origin + ": tensor indices must be integers");
        k[q] = row[q].get<int>();
      }
      if (!row[6].is_number()) throw InputError(origin + ": tensor value must be a number");
      cc.tensor.set(cascade::TensorKey::from_indices(k[0], k[1], k[2], k[3], k[4], k[5]), row[6].get<double>());
    }
  } else {
    throw InputError(origin + ": 'tensor' must be \"dyadic\" or a list of entries");
  }
  if (j.contains("initial")) {
    for (const auto& row : j["initial"]) {
      if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number_integer() ||
          !row[2].is_number()) {
        throw InputError(origin + ": initial rows must be [i, n, value]");
      }
      c.initial.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
  }
  c.t_end = get_or<double>(j, "t_end", 1.0, origin);
  if (j.contains("integrator")) {
    const auto& o = j["integrator"];
    if (!o.is_object()) throw InputError(origin + ": 'integrator' must be an object");
    auto& io = c.integrator;
    io.rel_tol = get_or<double>(o, "rel_tol", io.rel_tol, origin);
    io.abs_tol = get_or<double>(o, "abs_tol", io.abs_tol, origin);
    io.h_min = get_or<double>(o, "h_min", io.h_min, origin);
    io.h_max = get_or<double>(o, "h_max", io.h_max, origin);
    io.guard_factor = get_or<double>(o, "guard_factor", io.guard_factor, origin);
    io.max_steps = get_or<std::size_t>(o, "max_steps", io.max_steps, origin);
    io.per_unit_step = get_or<bool>(o, "per_unit_step", io.per_unit_step, origin);
  }
  return c;
}

inline SimulationConfig load_simulation_config(const std::string& path) {
  return parse_simulation_config(read_json(path), "'" + path + "'");
}

inline cascade::CascadeState initial_state(const SimulationConfig& c) {
  cascade::CascadeState x(c.cascade.shells, 0.0);
  for (const auto& [i, n, v] : c.initial) {
    const int ii = static_cast<int>(i), nn = static_cast<int>(n);
    if (ii < 1 || ii > cascade::kSpeciesCount || !c.cascade.shells.contains(nn)) {
      throw DomainError("initial entry (" + std::to_string(ii) + ", " + std::to_string(nn) + ") outside the state");
    }
    x.at(ii, nn) = v;
  }
  return x;
}

inline spectral::BasisSpec parse_basis_spec(const json& j, const std::string& origin) {
  check_schema(j, origin);
  spectral::BasisSpec b;
  b.lambda = require<double>(j, "lambda", origin);
  b.grid.n = require<int>(j, "n_grid", origin);
  b.grid.box = get_or<double>(j, "box_size", 1.0, origin);
  b.shells = {require<int>(j, "n_min", origin), require<int>(j, "n_max", origin)};
  b.center_radius = get_or<double>(j, "center_radius", b.center_radius, origin);
  b.radius_fraction = get_or<double>(j, "radius_fraction", b.radius_fraction, origin);
  return b;
}

struct AnalysisConfig {
  regularity::RegularityParams params;
  int j_min = 2;
  int j_max = 6;
};

inline AnalysisConfig parse_analysis_config(const json& j, const std::string& origin) {
  check_schema(j, origin);
  AnalysisConfig a;
  auto& p = a.params;
  p.alpha = require<double>(j, "alpha", origin);
  p.epsilon = get_or<double>(j, "epsilon", p.epsilon, origin);
  p.gamma = get_or<double>(j, "gamma", p.gamma, origin);
  p.K = get_or<double>(j, "K", p.K, origin);
  p.nuclear_depth = get_or<int>(j, "nuclear_depth", p.nuclear_depth, origin);
  p.window_exponent = get_or<int>(j, "window_exponent", p.window_exponent, origin);
  if (j.contains("exponent_offset")) p.exponent_offset = require<double>(j, "exponent_offset", origin);
  p.dilation = get_or<double>(j, "dilation", p.dilation, origin);
  p.workers = get_or<int>(j, "workers", p.workers, origin);
  a.j_min = get_or<int>(j, "j_min", a.j_min, origin);
  a.j_max = get_or<int>(j, "j_max", a.j_max, origin);
  return a;
}

inline json params_to_json(const regularity::RegularityParams& p) {
  return {{"alpha", p.alpha},
          {"epsilon", p.epsilon},
          {"gamma", p.gamma},
          {"K", p.K},
          {"nuclear_depth", p.nuclear_depth},
          {"window_exponent", p.window_exponent},
          {"exponent_offset", p.offset()},
          {"dilation", p.dilation}};
}

}  // namespace cascade_lab::io
