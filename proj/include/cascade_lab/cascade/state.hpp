#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cascade_lab/cascade/tensor.hpp"
#include "cascade_lab/error.hpp"

namespace cascade_lab::cascade {

/// Contiguous range of shell indices [first, last].
struct ShellRange {
  int first = 0;
  int last = 0;

  [[nodiscard]] int count() const { return last - first + 1; }
  [[nodiscard]] bool contains(int n) const { return n >= first && n <= last; }
  bool operator==(const ShellRange&) const = default;
};

/// Shell amplitudes X_{i,n} at one instant. Storage is species-major:
/// index (i-1)*shells + (n-first).
class CascadeState {
 public:
  CascadeState() = default;
  CascadeState(ShellRange shells, double time = 0.0)
      : shells_(shells), time_(time), values_(kSpeciesCount * shells.count(), 0.0) {
    if (shells.count() <= 0) throw DomainError("empty shell range");
  }

  [[nodiscard]] ShellRange shells() const { return shells_; }
  [[nodiscard]] double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  [[nodiscard]] std::size_t index(int species, int shell) const {
    return static_cast<std::size_t>((species - 1) * shells_.count() + (shell - shells_.first));
  }

  double& at(int species, int shell) { return values_[index(species, shell)]; }
  [[nodiscard]] double at(int species, int shell) const { return values_[index(species, shell)]; }

  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  [[nodiscard]] bool finite() const {
    for (double v : values_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

 private:
  ShellRange shells_{};
  double time_ = 0.0;
  std::vector<double> values_;
};

enum class TrajectoryStatus { completed, blowup_detected, step_underflow };

inline std::string_view to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::completed:
      return "completed";
    case TrajectoryStatus::blowup_detected:
      return "blowup_detected";
    case TrajectoryStatus::step_underflow:
      return "step_underflow";
  }
  return "unknown";
}

inline TrajectoryStatus status_from_string(std::string_view s) {
  if (s == "completed") return TrajectoryStatus::completed;
  if (s == "blowup_detected") return TrajectoryStatus::blowup_detected;
  if (s == "step_underflow") return TrajectoryStatus::step_underflow;
  throw InputError("unknown trajectory status '" + std::string(s) + "'");
}

struct CascadeTrajectory {
  std::vector<CascadeState> samples;
  TrajectoryStatus status = TrajectoryStatus::completed;
  std::optional<double> blowup_time_estimate;
  std::size_t rejected_steps = 0;
};

}  // namespace cascade_lab::cascade
