#pragma once

#include <string>

#include "cascade_lab/cascade/state.hpp"
#include "cascade_lab/io/common.hpp"

namespace cascade_lab::io {

inline std::string trajectory_csv(const cascade::CascadeTrajectory& tr) {
  if (tr.samples.empty()) throw DomainError("empty trajectory");
  const auto sh = tr.samples.front().shells();
  std::string out = "t";
  for (int i = 1; i <= cascade::kSpeciesCount; ++i)
    for (int n = sh.first; n <= sh.last; ++n) out += ",X_" + std::to_string(i) + "_" + std::to_string(n);
  out += '\n';
  for (const auto& s : tr.samples) {
    out += format_double(s.time());
    for (double v : s.values()) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

inline json trajectory_sidecar(const cascade::CascadeTrajectory& tr, const std::string& manifest_digest) {
  const auto sh = tr.samples.front().shells();
  json j{{"schema_version", kSchemaVersion},
         {"kind", "trajectory"},
         {"status", std::string(cascade::to_string(tr.status))},
         {"n_min", sh.first},
         {"n_max", sh.last},
         {"samples", tr.samples.size()},
         {"rejected_steps", tr.rejected_steps},
         {"t_first", tr.samples.front().time()},
         {"t_last", tr.samples.back().time()},
         {"manifest_digest", manifest_digest}};
  j["blowup_time_estimate"] = tr.blowup_time_estimate ? json(*tr.blowup_time_estimate) : json(nullptr);
  return j;
}

inline std::string sidecar_path(const std::string& path) { return path + ".json"; }

inline cascade::CascadeTrajectory read_trajectory(const std::string& csv_path) {
  const auto side = read_json(sidecar_path(csv_path));
  const std::string origin = "'" + sidecar_path(csv_path) + "'";
  check_schema(side, origin, "trajectory");
  const cascade::ShellRange sh{require<int>(side, "n_min", origin), require<int>(side, "n_max", origin)};
  cascade::CascadeTrajectory tr;
  tr.status = cascade::status_from_string(require<std::string>(side, "status", origin));
  if (side.contains("blowup_time_estimate") && side["blowup_time_estimate"].is_number())
    tr.blowup_time_estimate = side["blowup_time_estimate"].get<double>();
  tr.rejected_steps = get_or<std::size_t>(side, "rejected_steps", 0, origin);

  std::istringstream in(read_text(csv_path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,", 0) != 0) throw InputError("'" + csv_path + "': missing CSV header");
  const std::size_t width = static_cast<std::size_t>(cascade::kSpeciesCount * sh.count());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) throw InputError("'" + csv_path + "': bad number '" + cell + "'");
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (row.size() != width + 1) throw InputError("'" + csv_path + "': row has wrong column count");
    cascade::CascadeState s(sh, row[0]);
    std::copy(row.begin() + 1, row.end(), s.values().begin());
    tr.samples.push_back(std::move(s));
  }
  if (tr.samples.empty()) throw InputError("'" + csv_path + "': no samples");
  return tr;
}

/// Linear interpolation between the neighbouring samples.
inline cascade::CascadeState state_at(const cascade::CascadeTrajectory& tr, double t) {
  const auto& s = tr.samples;
  if (t < s.front().time() || t > s.back().time()) {
    throw DomainError("time " + format_double(t) + " outside trajectory span [" + format_double(s.front().time()) + ", " +
                      format_double(s.back().time()) + "]");
  }
  auto it = std::lower_bound(s.begin(), s.end(), t, [](const cascade::CascadeState& a, double v) { return a.time() < v; });
  if (it == s.begin() || it->time() == t) {
    auto out = *it;
    out.set_time(t);
    return out;
  }
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.time()) / (b.time() - a.time());
  cascade::CascadeState out(a.shells(), t);
  for (std::size_t k = 0; k < out.values().size(); ++k) out.values()[k] = (1.0 - w) * a.values()[k] + w * b.values()[k];
  return out;
}

}  // namespace cascade_lab::io
