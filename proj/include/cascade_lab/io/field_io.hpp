#pragma once

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "cascade_lab/io/common.hpp"
#include "cascade_lab/spectral/grid_field.hpp"

namespace cascade_lab::io {

static_assert(std::endian::native == std::endian::little, "field files are little-endian float64");

/// Writes <stem>.bin (3 components, C-order, float64 LE) and <stem>.json.
inline void write_field(const std::string& stem, const spectral::VectorField& u, const json& extra) {
  {
    std::ofstream out(stem + ".bin", std::ios::binary);
    if (!out) throw InputError("cannot write '" + stem + ".bin'");
    for (const auto& c : u.comp) out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
  }
  json side{{"schema_version", kSchemaVersion},
            {"kind", "field"},
            {"n_grid", u.grid.n},
            {"box_size", u.grid.box},
            {"components", 3},
            {"data", std::filesystem::path(stem + ".bin").filename().string()}};
  side["time"] = u.time ? json(*u.time) : json(nullptr);
  for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
  write_text(stem + ".json", side.dump(2) + "\n");
}

inline spectral::VectorField read_field(const std::string& sidecar) {
  const auto side = read_json(sidecar);
  const std::string origin = "'" + sidecar + "'";
  check_schema(side, origin, "field");
  spectral::GridSpec g{require<int>(side, "n_grid", origin), require<double>(side, "box_size", origin)};
  if (require<int>(side, "components", origin) != 3) throw InputError(origin + ": expected 3 components");
  spectral::check_grid(g);
  spectral::VectorField u(g);
  if (side.contains("time") && side["time"].is_number()) u.time = side["time"].get<double>();
  const auto bin = std::filesystem::path(sidecar).parent_path() / require<std::string>(side, "data", origin);
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw InputError("cannot open '" + bin.string() + "'");
  for (auto& c : u.comp) {
    in.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (!in) throw InputError("'" + bin.string() + "' is truncated");
  }
  if (!u.finite()) throw InputError("'" + bin.string() + "' contains non-finite samples");
  return u;
}

}  // namespace cascade_lab::io
