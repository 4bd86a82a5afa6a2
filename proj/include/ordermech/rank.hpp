#pragma once

#include <cstddef>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordermech/error.hpp"

namespace ordermech {

/// True iff `positions` is a permutation of 1..K with K >= 1.
inline bool validate_permutation(std::span<const int> positions) {
  const auto k = positions.size();
  if (k == 0) return false;
  std::vector<bool> seen(k + 1, false);
  for (int p : positions) {
    if (p < 1 || static_cast<std::size_t>(p) > k || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

/// Execution ranks of K tasks: positions()[k] is the 1-based rank at which
/// task k+1 is executed. Always a valid permutation.
class PriorityOrder {
 public:
  explicit PriorityOrder(std::vector<int> positions) : positions_(std::move(positions)) {
    if (!validate_permutation(positions_)) {
      throw ValidationError("priority order is not a permutation of 1.." +
                            std::to_string(positions_.size()));
    }
  }

  static PriorityOrder identity(std::size_t k) {
    std::vector<int> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<int>(i + 1);
    return PriorityOrder(std::move(p));
  }

  static PriorityOrder reversal(std::size_t k) {
    std::vector<int> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<int>(k - i);
    return PriorityOrder(std::move(p));
  }

  [[nodiscard]] std::size_t size() const { return positions_.size(); }
  [[nodiscard]] int operator[](std::size_t task) const { return positions_[task]; }
  [[nodiscard]] std::span<const int> positions() const { return positions_; }

  friend bool operator==(const PriorityOrder&, const PriorityOrder&) = default;

 private:
  std::vector<int> positions_;
};

/// Per-task misalignments and their sum.
struct MisalignmentProfile {
  std::vector<int> per_task;
  int total = 0;

  friend bool operator==(const MisalignmentProfile&, const MisalignmentProfile&) = default;
};

/// Spearman footrule between two orders of equal length: per-task absolute
/// rank differences.
inline MisalignmentProfile footrule(const PriorityOrder& a, const PriorityOrder& b) {
  if (a.size() != b.size()) {
    throw DimensionError("footrule: orders of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  MisalignmentProfile out;
  out.per_task.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.per_task.push_back(std::abs(a[k] - b[k]));
    out.total += out.per_task.back();
  }
  return out;
}

/// Validating overload for raw rank vectors.
inline MisalignmentProfile footrule(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw DimensionError("footrule: orders of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  return footrule(PriorityOrder({a.begin(), a.end()}), PriorityOrder({b.begin(), b.end()}));
}

/// Largest footrule total over permutations of K tasks, floor(K^2 / 2).
constexpr int max_footrule(std::size_t k) { return static_cast<int>(k * k / 2); }

inline void to_json(nlohmann::json& j, const MisalignmentProfile& m) {
  j = nlohmann::json{{"per_task", m.per_task}, {"total", m.total}};
}

inline void from_json(const nlohmann::json& j, MisalignmentProfile& m) {
  m.per_task = j.at("per_task").get<std::vector<int>>();
  m.total = j.at("total").get<int>();
  int sum = 0;
  for (int v : m.per_task) {
    if (v < 0) throw ValidationError("misalignment entries must be non-negative");
    sum += v;
  }
  if (sum != m.total) throw ValidationError("misalignment total does not equal the per-task sum");
}

}  // namespace ordermech

template <>
struct nlohmann::adl_serializer<ordermech::PriorityOrder> {
  static ordermech::PriorityOrder from_json(const json& j) {
    return ordermech::PriorityOrder(j.get<std::vector<int>>());
  }
  static void to_json(json& j, const ordermech::PriorityOrder& p) {
    j = std::vector<int>(p.positions().begin(), p.positions().end());
  }
};
