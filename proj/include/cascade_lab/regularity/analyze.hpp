#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cascade_lab/regularity/badness.hpp"
#include "cascade_lab/regularity/dimension.hpp"
#include "cascade_lab/regularity/vitali.hpp"

namespace cascade_lab::regularity {

struct LevelSummary {
  int j = 0;
  std::size_t tiling_count = 0;
  std::size_t bad_count = 0;
  std::size_t vitali_count = 0;
  /// Level-j cubes meeting the 5x dilated Vitali selection (diagnostic).
  std::size_t covering_count = 0;
  double cube_side = 0.0;
  double snap_error = 0.0;
  std::vector<CubeRecord> records;
};

struct CoveringReport {
  RegularityParams params;
  std::vector<LevelSummary> per_level;
  std::optional<DimensionFit> fit;
  std::string fit_note;
  double paper_bound = 0.0;
  /// Bad cubes at the two finest levels, standing in for the limsup set.
  std::size_t limsup_cubes = 0;
  bool window_empty = false;
};

inline CoveringReport analyze(const std::vector<VectorField>& snapshots, const RegularityParams& params, int j_lo,
                              int j_hi) {
  const BadnessEngine engine(snapshots, params, j_lo, j_hi);
  const auto& lat = engine.lattice();
  CoveringReport rep;
  rep.params = params;
  rep.paper_bound = params.paper_bound();
  rep.window_empty = engine.window_empty();
  std::map<int, double> counts;
  for (int j = j_lo; j <= j_hi; ++j) {
    LevelSummary lv;
    lv.j = j;
    lv.records = engine.classify(j);
    lv.tiling_count = lv.records.size();
    lv.cube_side = lat.side(j);
    lv.snap_error = lat.snap_error(j);
    std::vector<CubeId> bad;
    for (const auto& r : lv.records)
      if (r.verdict == Verdict::mildly_bad) bad.push_back(r.cube);
    lv.bad_count = bad.size();
    const auto chosen = vitali_cover(bad, lat, params.dilation);
    lv.vitali_count = chosen.size();
    lv.covering_count = covering_count(chosen, lat, j, params.dilation);
    counts[j] = static_cast<double>(lv.vitali_count);  // N(C_j) = |{5Q}|
    if (j >= j_hi - 1) rep.limsup_cubes += lv.bad_count;
    rep.per_level.push_back(std::move(lv));
  }
  try {
    rep.fit = dimension_estimate(counts);
  } catch (const DomainError& e) {
    rep.fit_note = std::string("d_est undefined: ") + e.what();
  }
  return rep;
}

}  // namespace cascade_lab::regularity
