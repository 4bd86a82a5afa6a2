#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordermech/error.hpp"
#include "ordermech/mechanism.hpp"

namespace ordermech {

/// How a winner resolves indifference among utility-maximizing realized
/// misalignments.
enum class GammaPolicy { social, min_gamma, max_gamma, adversarial };

enum class StrategyKind { truthful, fixed_misreport, best_response };

struct AgentStrategy {
  StrategyKind kind = StrategyKind::truthful;
  std::vector<int> offsets;  // fixed_misreport: one per stage, or one for all
  GammaPolicy gamma_policy = GammaPolicy::social;
};

inline std::string_view to_string(GammaPolicy p) {
  switch (p) {
    case GammaPolicy::social: return "social";
    case GammaPolicy::min_gamma: return "min";
    case GammaPolicy::max_gamma: return "max";
    case GammaPolicy::adversarial: return "adversarial";
  }
  return "?";
}

inline GammaPolicy gamma_policy_from(std::string_view name) {
  if (name == "social") return GammaPolicy::social;
  if (name == "min" || name == "min_gamma") return GammaPolicy::min_gamma;
  if (name == "max" || name == "max_gamma") return GammaPolicy::max_gamma;
  if (name == "adversarial") return GammaPolicy::adversarial;
  throw ConfigError("unknown gamma policy '" + std::string(name) + "'");
}

inline std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::truthful: return "truthful";
    case StrategyKind::fixed_misreport: return "fixed_misreport";
    case StrategyKind::best_response: return "best_response";
  }
  return "?";
}

inline StrategyKind strategy_kind_from(std::string_view name) {
  if (name == "truthful") return StrategyKind::truthful;
  if (name == "fixed_misreport") return StrategyKind::fixed_misreport;
  if (name == "best_response") return StrategyKind::best_response;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

/// Picks gamma in [0, min(theta, report)] maximizing `utility(gamma)`; the tie
/// among maximizers is settled by `policy`, using `welfare(gamma)` for the
/// social and adversarial policies. Remaining ties go to the smaller gamma.
template <class UtilityFn, class WelfareFn>
int choose_gamma(GammaPolicy policy, int theta, int report, UtilityFn&& utility,
                 WelfareFn&& welfare) {
  const int cap = std::min(theta, report);
  if (cap < 0) throw DomainError("choose_gamma: negative misalignment");

  std::vector<Money> u;
  u.reserve(cap + 1);
  for (int g = 0; g <= cap; ++g) u.push_back(utility(g));
  const Money best = *std::max_element(u.begin(), u.end());

  std::optional<int> pick;
  Money pick_welfare;
  for (int g = 0; g <= cap; ++g) {
    if (u[g] != best) continue;
    switch (policy) {
      case GammaPolicy::min_gamma:
        if (!pick) pick = g;
        break;
      case GammaPolicy::max_gamma:
        pick = g;
        break;
      case GammaPolicy::social:
      case GammaPolicy::adversarial: {
        Money w = welfare(g);
        bool better = policy == GammaPolicy::social ? w > pick_welfare : w < pick_welfare;
        if (!pick || better) {
          pick = g;
          pick_welfare = std::move(w);
        }
        break;
      }
    }
  }
  return *pick;
}

/// Winner's choice at one stage of an allocated path.
inline int choose_stage_gamma(const MechanismConfig& cfg, const AllocationPath& path,
                              const ReportTable& reports, const AgentRow& winner_truth,
                              std::size_t stage, GammaPolicy policy) {
  const bool repeat = stage > 0 && path.winners[stage - 1] == path.winners[stage];
  return choose_gamma(
      policy, winner_truth.effective(stage, repeat), path.winner_reports[stage],
      [&](int g) { return stage_utility(cfg, path, reports, winner_truth, stage, g); },
      [&](int g) { return stage_welfare(cfg, path, winner_truth, stage, g); });
}

inline std::vector<int> choose_gammas(const MechanismConfig& cfg, const AllocationPath& path,
                                      const ReportTable& reports, const TypeTable& truth,
                                      std::span<const GammaPolicy> policies) {
  std::vector<int> gammas(path.stages(), 0);
  for (std::size_t k = 0; k < path.stages(); ++k) {
    const auto w = path.winners[k];
    gammas[k] = choose_stage_gamma(cfg, path, reports, truth.row(w), k, policies[w]);
  }
  return gammas;
}

inline std::vector<int> choose_gammas(const MechanismConfig& cfg, const AllocationPath& path,
                                      const ReportTable& reports, const TypeTable& truth,
                                      GammaPolicy policy) {
  std::vector<GammaPolicy> all(truth.agents(), policy);
  return choose_gammas(cfg, path, reports, truth, all);
}

/// An agent's utility when it picks its realized misalignment optimally at
/// every stage it wins. `gammas` holds those choices (0 where it lost).
struct Payoff {
  Money utility;
  std::vector<int> gammas;
};

inline Payoff best_payoff(const MechanismConfig& cfg, const AllocationPath& path,
                          const ReportTable& reports, std::size_t agent, const AgentRow& truth) {
  Payoff out;
  out.gammas.assign(path.stages(), 0);
  for (std::size_t k = 0; k < path.stages(); ++k) {
    if (path.winners[k] != agent) continue;
    const int cap = gamma_cap(path, truth, k);
    std::optional<Money> best;
    for (int g = 0; g <= cap; ++g) {
      Money u = stage_utility(cfg, path, reports, truth, k, g);
      if (!best || u > *best) {
        best = std::move(u);
        out.gammas[k] = g;
      }
    }
    out.utility += *best;
  }
  return out;
}

inline Payoff best_payoff(const MechanismConfig& cfg, const ReportTable& reports,
                          std::size_t agent, const AgentRow& truth) {
  return best_payoff(cfg, allocate(cfg, reports), reports, agent, truth);
}

// ---------------------------------------------------------------------------
// Report enumeration.
// ---------------------------------------------------------------------------

/// Which report rows an agent may submit.
///  - fixed: one value per stage, no history dependence
///  - contingent: independent hat and tilde values
///  - markov: contingent with tilde < hat (what the lookahead mechanism accepts)
enum class ReportSpace { fixed, contingent, markov };

inline ReportSpace default_space(const MechanismConfig& cfg, const AgentRow& truth) {
  if (cfg.kind == MechanismKind::m2) return ReportSpace::markov;
  return truth.tilde == truth.hat ? ReportSpace::fixed : ReportSpace::contingent;
}

inline std::uint64_t row_count(ReportSpace space, std::size_t stages, int max) {
  const std::uint64_t values = static_cast<std::uint64_t>(max) + 1;
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < stages; ++k) {
    if (k == 0 || space == ReportSpace::fixed) {
      n *= values;
    } else if (space == ReportSpace::contingent) {
      n *= values * values;
    } else {
      n *= values * (values - 1) / 2;
    }
  }
  return n;
}

/// Calls `fn(row)` for every row of `space` with entries in [0, max], in
/// lexicographic order of (hat, tilde).
template <class Fn>
void for_each_row(ReportSpace space, std::size_t stages, int max, Fn&& fn) {
  if (max < 0) throw DomainError("report range is empty");
  AgentRow row{std::vector<int>(stages, 0), std::vector<int>(stages, 0)};
  // Digits: hat[0..K-1] then tilde[1..K-1] (absent in fixed mode).
  const std::size_t digits = space == ReportSpace::fixed ? stages : 2 * stages - 1;
  std::vector<int> d(digits, 0);
  auto entry = [&](std::size_t i) -> int& {
    return i < stages ? row.hat[i] : row.tilde[i - stages + 1];
  };
  while (true) {
    for (std::size_t i = 0; i < digits; ++i) entry(i) = d[i];
    row.tilde[0] = row.hat[0];
    if (space == ReportSpace::fixed) row.tilde = row.hat;
    bool ok = true;
    if (space == ReportSpace::markov) {
      for (std::size_t k = 1; k < stages; ++k) ok = ok && row.tilde[k] < row.hat[k];
    }
    if (ok) fn(static_cast<const AgentRow&>(row));

    std::size_t i = digits;
    while (i > 0 && d[i - 1] == max) d[--i] = 0;
    if (i == 0) return;
    ++d[i - 1];
  }
}

struct SearchBudget {
  std::uint64_t limit = 1'000'000;
};

inline AgentRow apply_offsets(const AgentRow& truth, const std::vector<int>& offsets) {
  if (offsets.empty()) return truth;
  if (offsets.size() != 1 && offsets.size() != truth.stages()) {
    throw ConfigError("fixed_misreport needs one offset or one per stage");
  }
  AgentRow out = truth;
  for (std::size_t k = 0; k < truth.stages(); ++k) {
    const int off = offsets.size() == 1 ? offsets[0] : offsets[k];
    out.hat[k] = std::max(0, truth.hat[k] + off);
    out.tilde[k] = k == 0 ? out.hat[0] : std::max(0, truth.tilde[k] + off);
  }
  return out;
}

/// Report row an agent submits. `profile` supplies the other agents'
/// reports; the agent's own row in it is ignored. Best responses search every
/// row of `space` with entries in [0, theta_max] and break ties toward the
/// truthful row, then toward the lexicographically smallest one.
inline AgentRow choose_report(const AgentStrategy& strategy, std::size_t agent,
                              const AgentRow& truth, const ReportTable& profile,
                              const MechanismConfig& cfg, int theta_max, ReportSpace space,
                              SearchBudget budget = {}) {
  switch (strategy.kind) {
    case StrategyKind::truthful:
      return truth;
    case StrategyKind::fixed_misreport:
      return apply_offsets(truth, strategy.offsets);
    case StrategyKind::best_response:
      break;
  }

  const auto evaluations = row_count(space, truth.stages(), theta_max) * truth.stages();
  if (evaluations > budget.limit) {
    throw BudgetError("best response needs " + std::to_string(evaluations) +
                      " evaluations, budget is " + std::to_string(budget.limit));
  }

  ReportTable reports = profile;
  reports.set_row(agent, truth);
  Money best = best_payoff(cfg, reports, agent, truth).utility;
  AgentRow choice = truth;
  for_each_row(space, truth.stages(), theta_max, [&](const AgentRow& row) {
    reports.set_row(agent, row);
    Money u = best_payoff(cfg, reports, agent, truth).utility;
    if (u > best) {
      best = std::move(u);
      choice = row;
    }
  });
  return choice;
}

inline AgentRow choose_report(const AgentStrategy& strategy, std::size_t agent,
                              const AgentRow& truth, const ReportTable& profile,
                              const MechanismConfig& cfg, int theta_max,
                              SearchBudget budget = {}) {
  return choose_report(strategy, agent, truth, profile, cfg, theta_max,
                       default_space(cfg, truth), budget);
}

/// Single-stage convenience: `profile` holds every agent's scalar report.
inline int choose_report(const AgentStrategy& strategy, std::size_t agent, int theta,
                         std::span<const int> profile, const MechanismConfig& cfg, int theta_max,
                         SearchBudget budget = {}) {
  std::vector<std::vector<int>> cols;
  for (int r : profile) cols.push_back({r});
  auto table = ReportTable::fixed(cols);
  return choose_report(strategy, agent, AgentRow::fixed({theta}), table, cfg, theta_max,
                       ReportSpace::fixed, budget)
      .hat[0];
}

}  // namespace ordermech
