#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ordermech/agents.hpp"
#include "ordermech/mechanism.hpp"

namespace ordermech {

struct RunResult {
  ReportTable reports;
  AllocationPath path;
  std::vector<int> gammas;
  std::vector<Settlement> stages;
};

/// Full timeline: collect reports, allocate, let winners realize gamma,
/// settle. Best-responding agents answer a profile in which every other
/// best responder reports truthfully.
inline RunResult run(const MechanismConfig& cfg, const TypeTable& truth,
                     std::span<const AgentStrategy> strategies, int theta_max,
                     SearchBudget budget = {}) {
  if (strategies.size() != truth.agents()) {
    throw DimensionError("need one strategy per agent");
  }
  check_stage_count(cfg, truth.stages());
  if (truth.agents() < 2) throw InsufficientAgentsError("insufficient agents: need at least 2");

  std::vector<AgentRow> rows;
  for (std::size_t i = 0; i < truth.agents(); ++i) {
    rows.push_back(strategies[i].kind == StrategyKind::best_response
                       ? truth.row(i)
                       : choose_report(strategies[i], i, truth.row(i), ReportTable{}, cfg,
                                       theta_max));
  }
  const ReportTable baseline(rows);
  for (std::size_t i = 0; i < truth.agents(); ++i) {
    if (strategies[i].kind == StrategyKind::best_response) {
      rows[i] = choose_report(strategies[i], i, truth.row(i), baseline, cfg, theta_max, budget);
    }
  }

  RunResult out;
  out.reports = ReportTable(rows);
  out.path = allocate(cfg, out.reports);
  std::vector<GammaPolicy> policies;
  for (const auto& s : strategies) policies.push_back(s.gamma_policy);
  out.gammas = choose_gammas(cfg, out.path, out.reports, truth, policies);
  out.stages = settle_path(cfg, out.path, out.reports, truth, out.gammas);
  return out;
}

inline RunResult run_indivisible(MechanismConfig cfg, const std::vector<int>& theta,
                                 std::span<const AgentStrategy> strategies, int theta_max,
                                 SearchBudget budget = {}) {
  cfg.kind = MechanismKind::indivisible;
  std::vector<std::vector<int>> cols;
  for (int t : theta) cols.push_back({t});
  return run(cfg, TypeTable::fixed(cols), strategies, theta_max, budget);
}

inline RunResult run_m1(MechanismConfig cfg, const TypeTable& truth,
                        std::span<const AgentStrategy> strategies, int theta_max,
                        SearchBudget budget = {}) {
  cfg.kind = MechanismKind::m1;
  return run(cfg, truth, strategies, theta_max, budget);
}

inline RunResult run_m2(MechanismConfig cfg, const TypeTable& truth,
                        std::span<const AgentStrategy> strategies, int theta_max,
                        SearchBudget budget = {}) {
  cfg.kind = MechanismKind::m2;
  if (auto bad = truth.markov_violation()) {
    throw ValidationError("agent " + std::to_string(bad->first + 1) + " stage " +
                          std::to_string(bad->second + 1) +
                          ": Markov type reduction violated (tilde must be < hat)");
  }
  return run(cfg, truth, strategies, theta_max, budget);
}

}  // namespace ordermech
