#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ordermech/dynamic_mechanism.hpp"
#include "ordermech/econ.hpp"
#include "ordermech/static_mechanism.hpp"
#include "ordermech/tables.hpp"

namespace ordermech {

enum class MechanismKind { indivisible, m1, m2 };

inline std::string_view to_string(MechanismKind k) {
  switch (k) {
    case MechanismKind::indivisible: return "indivisible";
    case MechanismKind::m1: return "m1";
    case MechanismKind::m2: return "m2";
  }
  return "?";
}

inline MechanismKind mechanism_kind_from(std::string_view name) {
  if (name == "indivisible") return MechanismKind::indivisible;
  if (name == "m1") return MechanismKind::m1;
  if (name == "m2") return MechanismKind::m2;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

/// Everything the principal commits to ex ante. The indivisible mechanism is
/// the one-stage case of the repeated one.
struct MechanismConfig {
  MechanismKind kind = MechanismKind::indivisible;
  PaymentRule rule;  // indivisible and m1; m2 reads only its gating fields
  CostFunction cost;
  ProfitFunction profit = ProfitFunction::affine(10, 2);
  M2Payment m2_payment = M2Payment::corrected;
};

inline void check_stage_count(const MechanismConfig& cfg, std::size_t stages) {
  if (cfg.kind == MechanismKind::indivisible && stages != 1) {
    throw DimensionError("the indivisible mechanism settles a single aggregate stage");
  }
}

inline AllocationPath allocate(const MechanismConfig& cfg, const ReportTable& reports) {
  check_stage_count(cfg, reports.stages());
  return cfg.kind == MechanismKind::m2 ? allocate_m2(reports) : allocate_m1(reports);
}

inline PaymentOutcome stage_payment(const MechanismConfig& cfg, const AllocationPath& path,
                                    const ReportTable& reports, std::size_t stage, int gamma) {
  if (cfg.kind == MechanismKind::m2) {
    return m2_payment(path, reports, stage, gamma, cfg.m2_payment, cfg.rule);
  }
  PaymentInputs in{path.runner_up[stage], path.winner_reports[stage], gamma};
  return pay(cfg.rule, in, cfg.cost, cfg.profit);
}

/// Largest realized misalignment the winner of `stage` may choose: bounded by
/// its true misalignment and by its report.
inline int gamma_cap(const AllocationPath& path, const AgentRow& winner_truth, std::size_t stage) {
  const bool repeat = stage > 0 && path.winners[stage - 1] == path.winners[stage];
  return std::min(winner_truth.effective(stage, repeat), path.winner_reports[stage]);
}

/// Winner's utility at `stage` for a given realized misalignment.
inline Money stage_utility(const MechanismConfig& cfg, const AllocationPath& path,
                           const ReportTable& reports, const AgentRow& winner_truth,
                           std::size_t stage, int gamma) {
  const bool repeat = stage > 0 && path.winners[stage - 1] == path.winners[stage];
  const int theta = winner_truth.effective(stage, repeat);
  return stage_payment(cfg, path, reports, stage, gamma).amount - cost(cfg.cost, theta, gamma);
}

/// Stage welfare S(gamma) - h(theta, gamma); payments cancel.
inline Money stage_welfare(const MechanismConfig& cfg, const AllocationPath& path,
                           const AgentRow& winner_truth, std::size_t stage, int gamma) {
  const bool repeat = stage > 0 && path.winners[stage - 1] == path.winners[stage];
  const int theta = winner_truth.effective(stage, repeat);
  return profit(cfg.profit, gamma) - cost(cfg.cost, theta, gamma);
}

inline std::vector<Settlement> settle_path(const MechanismConfig& cfg, const AllocationPath& path,
                                           const ReportTable& reports, const TypeTable& truth,
                                           const std::vector<int>& gammas) {
  if (cfg.kind == MechanismKind::m2) {
    return settle_m2(path, reports, truth, gammas, cfg.cost, cfg.profit, cfg.m2_payment, cfg.rule);
  }
  return settle_m1(path, reports, truth, gammas, cfg.rule, cfg.cost, cfg.profit);
}

inline Money total_welfare(const std::vector<Settlement>& stages) {
  Money sum;
  for (const auto& s : stages) sum += s.welfare;
  return sum;
}

inline Money total_utility(const std::vector<Settlement>& stages, std::size_t agent) {
  Money sum;
  for (const auto& s : stages) sum += s.utilities.at(agent);
  return sum;
}

}  // namespace ordermech
