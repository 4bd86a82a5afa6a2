#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordermech/error.hpp"

namespace ordermech {

/// One agent's misalignment for every stage. `hat[k]` applies when the agent
/// did not win stage k-1 (and always at stage 0); `tilde[k]` applies when it
/// did. `tilde[0]` mirrors `hat[0]` and carries no information.
struct AgentRow {
  std::vector<int> hat;
  std::vector<int> tilde;

  static AgentRow fixed(std::vector<int> theta) {
    AgentRow r{theta, theta};
    return r;
  }

  [[nodiscard]] std::size_t stages() const { return hat.size(); }

  [[nodiscard]] int effective(std::size_t stage, bool won_previous) const {
    return stage > 0 && won_previous ? tilde[stage] : hat[stage];
  }

  friend bool operator==(const AgentRow&, const AgentRow&) = default;
  friend auto operator<=>(const AgentRow&, const AgentRow&) = default;
};

/// Sum of |a - b| over every meaningful entry of two rows.
inline int row_distance(const AgentRow& a, const AgentRow& b) {
  int d = 0;
  for (std::size_t k = 0; k < a.stages(); ++k) {
    d += std::abs(a.hat[k] - b.hat[k]);
    if (k > 0) d += std::abs(a.tilde[k] - b.tilde[k]);
  }
  return d;
}

/// Agents x stages table of Markov misalignments. The tag separates true
/// types from submitted reports at compile time.
template <class Tag>
class MarkovTable {
 public:
  MarkovTable() = default;

  explicit MarkovTable(std::vector<AgentRow> rows) : rows_(std::move(rows)) { check_shape(); }

  /// Types that do not depend on allocation history.
  static MarkovTable fixed(const std::vector<std::vector<int>>& theta) {
    std::vector<AgentRow> rows;
    rows.reserve(theta.size());
    for (const auto& t : theta) rows.push_back(AgentRow::fixed(t));
    return MarkovTable(std::move(rows));
  }

  /// `tilde` rows hold stages 2..K only (K-1 entries).
  static MarkovTable markov(const std::vector<std::vector<int>>& hat,
                            const std::vector<std::vector<int>>& tilde) {
    if (hat.size() != tilde.size()) throw DimensionError("hat and tilde disagree on agent count");
    std::vector<AgentRow> rows;
    for (std::size_t i = 0; i < hat.size(); ++i) {
      if (hat[i].empty() || tilde[i].size() + 1 != hat[i].size()) {
        throw DimensionError("agent " + std::to_string(i + 1) + ": tilde must have one entry per stage after the first");
      }
      AgentRow r{hat[i], hat[i]};
      for (std::size_t k = 1; k < hat[i].size(); ++k) r.tilde[k] = tilde[i][k - 1];
      rows.push_back(std::move(r));
    }
    return MarkovTable(std::move(rows));
  }

  [[nodiscard]] std::size_t agents() const { return rows_.size(); }
  [[nodiscard]] std::size_t stages() const { return rows_.empty() ? 0 : rows_.front().stages(); }

  [[nodiscard]] const AgentRow& row(std::size_t agent) const { return rows_.at(agent); }
  [[nodiscard]] const std::vector<AgentRow>& rows() const { return rows_; }

  void set_row(std::size_t agent, AgentRow row) {
    if (row.stages() != stages() || row.tilde.size() != row.hat.size()) {
      throw DimensionError("replacement row has the wrong number of stages");
    }
    check_row(row, agent);
    rows_.at(agent) = std::move(row);
  }

  [[nodiscard]] int hat(std::size_t agent, std::size_t stage) const { return rows_[agent].hat[stage]; }
  [[nodiscard]] int tilde(std::size_t agent, std::size_t stage) const {
    return rows_[agent].tilde[stage];
  }

  /// Misalignment of `agent` at `stage` given who won the previous stage.
  [[nodiscard]] int effective(std::size_t agent, std::size_t stage,
                              std::optional<std::size_t> previous_winner) const {
    return rows_[agent].effective(stage, previous_winner && *previous_winner == agent);
  }

  /// tilde == hat everywhere: history does not matter.
  [[nodiscard]] bool is_fixed() const {
    for (const auto& r : rows_) {
      if (r.tilde != r.hat) return false;
    }
    return true;
  }

  /// First (agent, stage) with tilde >= hat, if any.
  [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> markov_violation() const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t k = 1; k < rows_[i].stages(); ++k) {
        if (rows_[i].tilde[k] >= rows_[i].hat[k]) return std::pair{i, k};
      }
    }
    return std::nullopt;
  }

  [[nodiscard]] int max_entry() const {
    int m = 0;
    for (const auto& r : rows_) {
      for (int v : r.hat) m = std::max(m, v);
      for (int v : r.tilde) m = std::max(m, v);
    }
    return m;
  }

  friend bool operator==(const MarkovTable&, const MarkovTable&) = default;

 private:
  void check_shape() const {
    if (rows_.empty()) return;
    const auto k = rows_.front().stages();
    if (k == 0) throw DimensionError("tables need at least one stage");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& r = rows_[i];
      if (r.hat.size() != k || r.tilde.size() != k) {
        throw DimensionError("agent " + std::to_string(i + 1) + " has a ragged row");
      }
      check_row(r, i);
    }
  }

  static void check_row(const AgentRow& r, std::size_t agent) {
    for (std::size_t s = 0; s < r.stages(); ++s) {
      if (r.hat[s] < 0 || r.tilde[s] < 0) {
        throw ValidationError("agent " + std::to_string(agent + 1) +
                              ": misalignments must be non-negative");
      }
    }
    if (r.tilde[0] != r.hat[0]) {
      throw ValidationError("agent " + std::to_string(agent + 1) +
                            ": stage 1 has no history-dependent entry");
    }
  }

  std::vector<AgentRow> rows_;
};

struct TypeTag;
struct ReportTag;

/// True private misalignments.
using TypeTable = MarkovTable<TypeTag>;
/// Misalignments as submitted to the principal.
using ReportTable = MarkovTable<ReportTag>;

inline ReportTable truthful_reports(const TypeTable& truth) { return ReportTable(truth.rows()); }

}  // namespace ordermech
