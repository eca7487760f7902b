#pragma once

#include "cascade_lab/io/common.hpp"
#include "cascade_lab/io/config_io.hpp"
#include "cascade_lab/regularity/analyze.hpp"

namespace cascade_lab::io {

inline json report_to_json(const regularity::CoveringReport& r, const std::string& manifest_digest) {
  json levels = json::array();
  for (const auto& lv : r.per_level) {
    json cubes = json::array();
    for (const auto& rec : lv.records) {
      json c{{"corner", rec.cube.corner},
             {"lhs", rec.badness_lhs},
             {"window_term", rec.window_term},
             {"dissipation_term", rec.dissipation_term},
             {"threshold", rec.threshold},
             {"verdict", rec.verdict == regularity::Verdict::mildly_bad ? "mildly_bad" : "regular"}};
      cubes.push_back(std::move(c));
    }
    levels.push_back({{"j", lv.j},
                      {"tiling_count", lv.tiling_count},
                      {"bad_count", lv.bad_count},
                      {"vitali_count", lv.vitali_count},
                      {"covering_count", lv.covering_count},
                      {"cube_side", lv.cube_side},
                      {"snap_error", lv.snap_error},
                      {"cubes", std::move(cubes)}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"kind", "report"},
         {"params", params_to_json(r.params)},
         {"per_level", std::move(levels)},
         {"paper_bound", r.paper_bound},
         {"limsup_levels", "M_jmax union M_jmax-1"},
         {"limsup_cubes", r.limsup_cubes},
         {"window_empty", r.window_empty},
         {"manifest_digest", manifest_digest}};
  if (r.fit) {
    j["d_est"] = r.fit->d_est;
    j["residual"] = r.fit->residual;
    j["levels_used"] = r.fit->levels_used;
  } else {
    j["d_est"] = nullptr;
    j["residual"] = nullptr;
    j["fit_note"] = r.fit_note;
  }
  return j;
}

inline std::string report_plot_csv(const regularity::CoveringReport& r) {
  std::string out = "j,log2_count\n";
  for (const auto& lv : r.per_level) {
    out += std::to_string(lv.j) + ",";
    out += lv.vitali_count > 0 ? format_double(std::log2(static_cast<double>(lv.vitali_count))) : "nan";
    out += '\n';
  }
  return out;
}

}  // namespace cascade_lab::io
