#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "cascade_lab/regularity/coefficients.hpp"

namespace cascade_lab::regularity {

struct RegularityParams {
  double alpha = 1.0;
  double epsilon = 1.0 / 3.0;
  double gamma = 0.1;
  double K = 1.0;
  int nuclear_depth = 2;
  int window_exponent = 10;
  /// Threshold exponent offset; unset means epsilon.
  std::optional<double> exponent_offset;
  /// Enlargement applied to mildly bad cubes before the Vitali selection.
  double dilation = 1.0;
  int workers = 1;

  [[nodiscard]] double offset() const { return exponent_offset.value_or(epsilon); }
  [[nodiscard]] double paper_bound() const { return 5.0 - 4.0 * alpha + offset() + gamma; }
  [[nodiscard]] double threshold(int j) const {
    return K * std::exp2(-(5.0 - 4.0 * alpha) * j - offset() * j - gamma * j);
  }
};

inline void check_params(const RegularityParams& p) {
  if (!(p.alpha > 0.0) || !(p.epsilon > 0.0 && p.epsilon < 1.0) || !(p.gamma > 0.0) || !(p.K > 0.0) ||
      p.nuclear_depth < 1 || p.window_exponent < 1 || !(p.offset() > 0.0) || !(p.dilation >= 1.0) || p.workers < 1) {
    throw DomainError("regularity parameters must be positive (0 < epsilon < 1, depth >= 1, dilation >= 1)");
  }
}

enum class Verdict { regular, mildly_bad };

struct CubeRecord {
  CubeId cube;
  std::vector<std::pair<double, double>> u_history;  // (t, u_Q)
  double window_term = 0.0;
  double dissipation_term = 0.0;
  double badness_lhs = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::regular;
};

/// 2^{wj} int_{T-2^{-wj}}^T g dt for the piecewise-linear interpolant of g,
/// clipped to the sampled span. Computed backwards from T so tiny windows stay exact.
inline double window_mean(const std::vector<double>& t, const std::vector<double>& g, double delta) {
  if (t.size() < 2) return 0.0;
  double remaining = delta;
  double integral = 0.0;
  for (std::size_t k = t.size() - 1; k > 0 && remaining > 0.0; --k) {
    const double h = t[k] - t[k - 1];
    if (remaining >= h) {
      integral += 0.5 * h * (g[k] + g[k - 1]);
      remaining -= h;
    } else {
      const double at = g[k] + (g[k - 1] - g[k]) * (remaining / h);
      integral += 0.5 * remaining * (g[k] + at);
      remaining = 0.0;
    }
  }
  return integral / delta;
}

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) s += 0.5 * (t[k] - t[k - 1]) * (g[k] + g[k - 1]);
  return s;
}

/// Shared per-snapshot cube energies for classifying a set of levels.
class BadnessEngine {
 public:
  BadnessEngine(const std::vector<VectorField>& snapshots, const RegularityParams& params, int j_lo, int j_hi)
      : params_(params), j_lo_(j_lo), j_hi_(j_hi) {
    check_params(params);
    if (snapshots.empty()) throw DomainError("no snapshots");
    if (j_hi < j_lo) throw DomainError("empty level range");
    grid_ = snapshots.front().grid;
    lattice_.grid = grid_;
    lattice_.epsilon = params.epsilon;
    lattice_.min_level = j_lo - 2 * params.nuclear_depth;
    partition_ = spectral::LPPartition::for_grid(grid_);
    for (const auto& s : snapshots) {
      if (!(s.grid == grid_)) throw DomainError("snapshots use different grids");
      times_.push_back(s.time.value_or(0.0));
    }
    for (std::size_t k = 1; k < times_.size(); ++k)
      if (!(times_[k] > times_[k - 1])) throw DomainError("snapshot times must be strictly increasing");
    for (int j = j_lo; j <= j_hi; ++j) {
      if (!lattice_.resolved(j)) {
        throw DomainError("level " + std::to_string(j) + " under-resolved; " + resolvable_region(lattice_));
      }
      partition_.require(j);
    }
    window_empty_ = times_.size() < 2;
    compute(snapshots);
  }

  [[nodiscard]] const CubeLattice& lattice() const { return lattice_; }
  [[nodiscard]] const spectral::LPPartition& partition() const { return partition_; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] bool window_empty() const { return window_empty_; }

  [[nodiscard]] CubeRecord evaluate(const CubeId& q, FamilySet& family) const {
    const int j = q.level;
    CubeRecord rec;
    rec.cube = q;
    const std::size_t idx = lattice_.flat(q);
    const std::size_t S = times_.size();
    for (std::size_t s = 0; s < S; ++s) rec.u_history.emplace_back(times_[s], std::sqrt(std::max(0.0, own_.at(j)[s][idx])));

    std::vector<double> d(S);
    for (std::size_t s = 0; s < S; ++s) d[s] = diss_.at(j)[s][idx];
    rec.dissipation_term = trapezoid(times_, d);

    if (!window_empty_) {
      family.clear();
      nuclear_family_members(q, family);
      std::vector<double> g(S, 0.0);
      for (std::size_t s = first_window_; s < S; ++s) {
        double sum = 0.0;
        for (const auto& c : family.members()) sum += window_.at(c.level)[s - first_window_][lattice_.flat(c)];
        g[s] = sum;
      }
      std::vector<double> tt(times_.begin() + static_cast<long>(first_window_), times_.end());
      std::vector<double> gg(g.begin() + static_cast<long>(first_window_), g.end());
      rec.window_term = window_mean(tt, gg, std::exp2(-static_cast<double>(params_.window_exponent) * j));
    }
    rec.badness_lhs = rec.window_term + rec.dissipation_term;
    rec.threshold = params_.threshold(j);
    rec.verdict = rec.badness_lhs >= rec.threshold ? Verdict::mildly_bad : Verdict::regular;
    return rec;
  }

  /// Records for every cube of level j, computed on `workers` threads; order is lattice order.
  [[nodiscard]] std::vector<CubeRecord> classify(int j) const {
    const auto cubes = tiling(lattice_, j);
    std::vector<CubeRecord> out(cubes.size());
    const int workers = std::max(1, std::min<int>(params_.workers, static_cast<int>(cubes.size())));
    auto run = [&](int w) {
      FamilySet family(lattice_);
      for (std::size_t k = static_cast<std::size_t>(w); k < cubes.size(); k += static_cast<std::size_t>(workers))
        out[k] = evaluate(cubes[k], family);
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }
    return out;
  }

 private:
  const std::vector<CubeId>& nuclear_family_members(const CubeId& q, FamilySet& set) const {
    set.insert(q);
    std::size_t begin = 0;
    for (int d = 0; d < params_.nuclear_depth; ++d) {
      const std::size_t end = set.members().size();
      for (std::size_t k = begin; k < end; ++k) {
        const CubeId member = set.members()[k];
        for (const auto& band : nuclear_bands(member, lattice_))
          for (const auto& c : band) set.insert(c);
      }
      begin = end;
    }
    return set.members();
  }

  void compute(const std::vector<VectorField>& snapshots) {
    const std::size_t S = snapshots.size();
    const int k_top = partition_.j_max;
    const int depth = params_.nuclear_depth;
    const int fam_lo = j_lo_ - 2 * depth;
    const int fam_hi = j_hi_ + 2 * depth;

    // Snapshots reaching into the widest window (that of level j_lo), plus one before it.
    const double T = times_.back();
    const double widest = std::exp2(-static_cast<double>(params_.window_exponent) * j_lo_);
    first_window_ = S - 1;
    while (first_window_ > 0 && times_[first_window_] > T - widest) --first_window_;
    if (window_empty_) first_window_ = S;

    for (int j = j_lo_; j <= j_hi_; ++j) {
      diss_[j].resize(S);
      own_[j].resize(S);
    }
    for (int l = fam_lo; l <= fam_hi; ++l) window_[l].resize(S - std::min(S, first_window_));

    for (std::size_t s = 0; s < S; ++s) {
      const auto& u = snapshots[s];
      std::vector<double> acc(grid_.points(), 0.0);
      std::map<int, std::vector<double>> band_density;
      for (int k = k_top; k >= j_lo_; --k) {
        auto dens = energy_density(spectral::band_project(u, k));
        const double w = std::exp2(2.0 * params_.alpha * k);
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += w * dens[p];
        if (k <= j_hi_) {
          diss_[k][s] = level_energies(acc, k, lattice_);
          own_[k][s] = level_energies(dens, k, lattice_);
        }
        band_density[k] = std::move(dens);
      }
      if (s < first_window_) continue;
      for (int l = fam_lo; l <= fam_hi; ++l) {
        auto it = band_density.find(l);
        std::vector<double> dens = it != band_density.end() ? it->second : energy_density(spectral::band_project(u, l));
        window_[l][s - first_window_] = level_energies(dens, l, lattice_);
      }
    }
  }

  RegularityParams params_;
  int j_lo_, j_hi_;
  GridSpec grid_;
  CubeLattice lattice_;
  spectral::LPPartition partition_;
  std::vector<double> times_;
  bool window_empty_ = false;
  std::size_t first_window_ = 0;
  std::map<int, std::vector<std::vector<double>>> diss_;    // level -> snapshot -> cube
  std::map<int, std::vector<std::vector<double>>> own_;     // u_Q^2 at band = level
  std::map<int, std::vector<std::vector<double>>> window_;  // family levels, window snapshots only
};

/// (lhs, threshold) for one cube.
inline std::pair<double, double> badness_functional(const std::vector<VectorField>& snapshots, const CubeId& q,
                                                    const RegularityParams& params) {
  const BadnessEngine engine(snapshots, params, q.level, q.level);
  FamilySet family(engine.lattice());
  const auto rec = engine.evaluate(q, family);
  return {rec.badness_lhs, rec.threshold};
}

/// Mildly bad cubes of the level-j tiling, in lattice order.
inline std::vector<CubeId> classify_level(const std::vector<VectorField>& snapshots, int j, const RegularityParams& params) {
  const BadnessEngine engine(snapshots, params, j, j);
  std::vector<CubeId> bad;
  for (const auto& r : engine.classify(j))
    if (r.verdict == Verdict::mildly_bad) bad.push_back(r.cube);
  return bad;
}

}  // namespace cascade_lab::regularity
