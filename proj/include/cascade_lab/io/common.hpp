#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "cascade_lab/error.hpp"
#include "json.hpp"

namespace cascade_lab::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + origin + ": " + e.what());
  }
}

inline json read_json(const std::string& path) { return parse_json(read_text(path), "'" + path + "'"); }

/// Rejects documents whose schema_version is missing or unknown.
inline void check_schema(const json& j, const std::string& origin, const char* kind = nullptr) {
  if (!j.is_object()) throw InputError(origin + ": top-level value must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw InputError(origin + ": missing integer schema_version");
  }
  const int v = j["schema_version"].get<int>();
  if (v != kSchemaVersion) throw InputError(origin + ": unsupported schema_version " + std::to_string(v));
  if (kind && (!j.contains("kind") || j["kind"] != kind)) {
    throw InputError(origin + ": expected kind '" + std::string(kind) + "'");
  }
}

/// Typed field access that turns type mismatches into InputError.
template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& origin) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(origin + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
T require(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key)) throw InputError(origin + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(origin + ": field '" + key + "' has the wrong type");
  }
}

/// FNV-1a 64-bit, hex.
inline std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace cascade_lab::io
