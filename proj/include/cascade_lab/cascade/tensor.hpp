#pragma once

// Structure constants of a local cascade operator.
//
// An entry a_{i1,i2,i3,mu1,mu2,mu3} couples species i1 at shell m+mu1 and
// species i2 at shell m+mu2 into species i3 at shell m+mu3, for every base
// shell m. Each (species, offset) pair is a Leg; a key is an ordered triple of
// legs where the last leg is the output. Offsets must form a triple in
// S = {(0,0,0),(1,0,0),(0,1,0),(0,0,1)}.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "cascade_lab/error.hpp"

namespace cascade_lab::cascade {

inline constexpr int kSpeciesCount = 4;

struct Leg {
  int species = 1;  // 1..4
  int offset = 0;   // 0 or 1

  auto operator<=>(const Leg&) const = default;
};

struct TensorKey {
  std::array<Leg, 3> legs;

  static TensorKey from_indices(int i1, int i2, int i3, int mu1, int mu2, int mu3) {
    return TensorKey{{Leg{i1, mu1}, Leg{i2, mu2}, Leg{i3, mu3}}};
  }

  /// Key with the two input legs exchanged.
  [[nodiscard]] TensorKey mirror() const { return TensorKey{{legs[1], legs[0], legs[2]}}; }

  /// Sorted legs; identifies the cancellation group the key belongs to.
  [[nodiscard]] std::array<Leg, 3> group() const {
    auto g = legs;
    std::sort(g.begin(), g.end());
    return g;
  }

  [[nodiscard]] std::string str() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%d,%d,%d;%d,%d,%d)", legs[0].species, legs[1].species,
                  legs[2].species, legs[0].offset, legs[1].offset, legs[2].offset);
    return buf;
  }

  auto operator<=>(const TensorKey&) const = default;
};

/// Throws InputError unless every species is in 1..4 and the offsets lie in S.
inline void check_key(const TensorKey& key) {
  int ones = 0;
  for (const auto& leg : key.legs) {
    if (leg.species < 1 || leg.species > kSpeciesCount) {
      throw InputError("tensor key " + key.str() + ": species index out of {1,2,3,4}");
    }
    if (leg.offset != 0 && leg.offset != 1) {
      throw InputError("tensor key " + key.str() + ": offset triple not in S");
    }
    ones += leg.offset;
  }
  if (ones > 1) throw InputError("tensor key " + key.str() + ": offset triple not in S");
}

class CoefficientTensor {
 public:
  using Entries = std::map<TensorKey, double>;

  CoefficientTensor() = default;

  /// Sets (overwrites) one entry. Malformed keys raise InputError.
  void set(const TensorKey& key, double value) {
    check_key(key);
    if (!std::isfinite(value)) throw InputError("tensor entry " + key.str() + " is not finite");
    entries_[key] = value;
  }

  void add(const TensorKey& key, double value) {
    check_key(key);
    entries_[key] += value;
  }

  /// Sets the entry for inputs (in1, in2) -> out together with its mirror.
  void set_symmetric(Leg in1, Leg in2, Leg out, double value) {
    const TensorKey key{{in1, in2, out}};
    set(key, value);
    set(key.mirror(), value);
  }

  [[nodiscard]] double get(const TensorKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
  }

  [[nodiscard]] const Entries& entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }

 private:
  Entries entries_;
};

struct Violation {
  enum class Kind { symmetry, cancellation };
  Kind kind;
  TensorKey key;  // offending key (symmetry) or group representative (cancellation)
  double magnitude;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool valid() const { return violations.empty(); }
};

inline constexpr double kConstraintTolerance = 1e-12;

/// Checks input-exchange symmetry and the six-permutation cancellation sums.
inline ValidationReport validate_tensor(const CoefficientTensor& tensor) {
  ValidationReport report;
  for (const auto& [key, value] : tensor.entries()) check_key(key);

  for (const auto& [key, value] : tensor.entries()) {
    const TensorKey mirror = key.mirror();
    if (mirror == key) continue;
    const bool mirror_present = tensor.entries().contains(mirror);
    // Visit each unordered pair once; an absent mirror is reported from the present side.
    if (mirror_present && mirror < key) continue;
    const double diff = std::abs(value - tensor.get(mirror));
    if (diff > kConstraintTolerance) {
      report.violations.push_back({Violation::Kind::symmetry, key, diff,
                                   "a" + key.str() + " != a" + mirror.str()});
    }
  }

  std::map<std::array<Leg, 3>, bool> seen;
  for (const auto& [key, value] : tensor.entries()) {
    const auto group = key.group();
    if (seen.contains(group)) continue;
    seen[group] = true;
    auto perm = group;
    double sum = 0.0;
    do {
      sum += tensor.get(TensorKey{perm});
    } while (std::next_permutation(perm.begin(), perm.end()));
    // next_permutation visits distinct orderings only; weight each by the
    // size of its stabilizer so the sum runs over all six placements.
    int multiplicity = 1;
    if (group[0] == group[1] && group[1] == group[2]) {
      multiplicity = 6;
    } else if (group[0] == group[1] || group[1] == group[2] || group[0] == group[2]) {
      multiplicity = 2;
    }
    sum *= multiplicity;
    if (std::abs(sum) > kConstraintTolerance) {
      report.violations.push_back({Violation::Kind::cancellation, TensorKey{group}, std::abs(sum),
                                   "cancellation sum over group " + TensorKey{group}.str() +
                                       " is " + std::to_string(sum)});
    }
  }
  return report;
}

}  // namespace cascade_lab::cascade
