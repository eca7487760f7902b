#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "cascade_lab/io/common.hpp"

namespace cascade_lab::io {

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  json parameters = json::object();
  std::string config_digest;
  double wall_time = 0.0;

  /// Digest over everything except paths and wall time, so reruns agree.
  [[nodiscard]] std::string digest() const {
    const json core{{"tool_version", kToolVersion},
                    {"subcommand", subcommand},
                    {"config_digest", config_digest},
                    {"parameters", parameters}};
    return fnv1a(core.dump());
  }

  [[nodiscard]] json to_json() const {
    return {{"schema_version", kSchemaVersion},
            {"kind", "manifest"},
            {"tool_version", kToolVersion},
            {"subcommand", subcommand},
            {"config_digest", config_digest},
            {"digest", digest()},
            {"inputs", inputs},
            {"outputs", outputs},
            {"parameters", parameters},
            {"wall_time_s", wall_time}};
  }
};

/// Digest of the concatenated contents of the input files.
inline std::string digest_files(const std::vector<std::string>& paths) {
  std::string all;
  for (const auto& p : paths) {
    all += read_text(p);
    all += '\0';
  }
  return fnv1a(all);
}

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace cascade_lab::io
