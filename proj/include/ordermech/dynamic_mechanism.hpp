#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ordermech/econ.hpp"
#include "ordermech/error.hpp"
#include "ordermech/static_mechanism.hpp"
#include "ordermech/tables.hpp"

namespace ordermech {

/// Winner of every stage plus what the principal saw along that path.
struct AllocationPath {
  std::vector<std::size_t> winners;
  std::vector<int> winner_reports;  // effective reported misalignment of the winner
  std::vector<int> runner_up;       // lowest effective report among the others
  int total = 0;                    // sum of winner_reports

  [[nodiscard]] std::size_t stages() const { return winners.size(); }
  [[nodiscard]] std::optional<std::size_t> previous(std::size_t stage) const {
    if (stage == 0) return std::nullopt;
    return winners[stage - 1];
  }
  /// Whether the winner of `stage` also wins the next stage.
  [[nodiscard]] bool continues(std::size_t stage) const {
    return stage + 1 < winners.size() && winners[stage + 1] == winners[stage];
  }
};

/// Effective reports of every agent at `stage`, given the previous winner.
inline std::vector<int> stage_reports(const ReportTable& reports, std::size_t stage,
                                      std::optional<std::size_t> previous_winner) {
  std::vector<int> out(reports.agents());
  for (std::size_t i = 0; i < reports.agents(); ++i) {
    out[i] = reports.effective(i, stage, previous_winner);
  }
  return out;
}

/// Fills in winner reports and runner-up values for a given winner sequence.
inline AllocationPath describe_path(const ReportTable& reports, std::vector<std::size_t> winners) {
  if (winners.size() != reports.stages()) throw DimensionError("path length differs from stage count");
  if (reports.agents() < 2) throw InsufficientAgentsError("insufficient agents: need at least 2");
  AllocationPath path;
  path.winners = std::move(winners);
  for (std::size_t k = 0; k < path.stages(); ++k) {
    const auto w = path.winners[k];
    if (w >= reports.agents()) throw DimensionError("path names an unknown agent");
    auto eff = stage_reports(reports, k, path.previous(k));
    int bar = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < eff.size(); ++i) {
      if (i != w) bar = std::min(bar, eff[i]);
    }
    path.winner_reports.push_back(eff[w]);
    path.runner_up.push_back(bar);
    path.total += eff[w];
  }
  return path;
}

/// Repeated second-price auction: stage k goes to the lowest effective report
/// at stage k, ties to the lowest index.
inline AllocationPath allocate_m1(const ReportTable& reports) {
  if (reports.agents() < 2) throw InsufficientAgentsError("insufficient agents: need at least 2");
  std::vector<std::size_t> winners;
  std::optional<std::size_t> previous;
  for (std::size_t k = 0; k < reports.stages(); ++k) {
    auto eff = stage_reports(reports, k, previous);
    winners.push_back(select_winner(eff).winner);
    previous = winners.back();
  }
  return describe_path(reports, std::move(winners));
}

/// Lookahead allocation: the winner sequence minimizing the total effective
/// reported misalignment, by dynamic programming over (stage, previous
/// winner). Among optimal sequences the lexicographically smallest is taken.
inline AllocationPath allocate_m2(const ReportTable& reports) {
  const auto n = reports.agents();
  const auto stages = reports.stages();
  if (n < 2) throw InsufficientAgentsError("insufficient agents: need at least 2");
  if (auto bad = reports.markov_violation()) {
    throw InvalidReportError("agent " + std::to_string(bad->first + 1) + " stage " +
                             std::to_string(bad->second + 1) +
                             ": reported tilde must be strictly below reported hat");
  }

  // cost_to_go[k][p]: best total from stage k on when agent p won stage k-1;
  // p == n stands for "no previous winner".
  std::vector<std::vector<long>> cost_to_go(stages + 1, std::vector<long>(n + 1, 0));
  auto prev_of = [n](std::size_t p) -> std::optional<std::size_t> {
    if (p == n) return std::nullopt;
    return p;
  };
  for (std::size_t k = stages; k-- > 0;) {
    for (std::size_t p = 0; p <= n; ++p) {
      long best = std::numeric_limits<long>::max();
      for (std::size_t w = 0; w < n; ++w) {
        best = std::min(best, reports.effective(w, k, prev_of(p)) + cost_to_go[k + 1][w]);
      }
      cost_to_go[k][p] = best;
    }
  }

  std::vector<std::size_t> winners;
  std::size_t p = n;
  for (std::size_t k = 0; k < stages; ++k) {
    for (std::size_t w = 0; w < n; ++w) {
      if (reports.effective(w, k, prev_of(p)) + cost_to_go[k + 1][w] == cost_to_go[k][p]) {
        winners.push_back(w);
        p = w;
        break;
      }
    }
  }
  return describe_path(reports, std::move(winners));
}

/// Payment variants for the lookahead mechanism. `corrected` subtracts the
/// realized misalignment so the winner's utility does not depend on it;
/// `literal` omits that term.
enum class M2Payment { corrected, literal };

/// Lookahead payment to the winner of `stage`. A winner who also wins the next
/// stage is additionally paid hat' - tilde' of that next stage.
inline PaymentOutcome m2_payment(const AllocationPath& path, const ReportTable& reports,
                                 std::size_t stage, int gamma, M2Payment mode,
                                 const PaymentRule& gating) {
  if (gamma < 0) throw DomainError("realized misalignment must be non-negative");
  if (gating.gating && gamma > path.winner_reports[stage]) {
    return {gating.gating_mode == GatingMode::penalty ? -gating.penalty : Money(0), true};
  }
  const auto w = path.winners[stage];
  long amount = path.runner_up[stage];
  if (path.continues(stage)) amount += reports.hat(w, stage + 1) - reports.tilde(w, stage + 1);
  if (mode == M2Payment::corrected) amount -= gamma;
  return {Money(amount)};
}

/// True misalignment of the stage winner along `path`.
inline int true_stage_theta(const AllocationPath& path, const TypeTable& truth, std::size_t stage) {
  return truth.effective(path.winners[stage], stage, path.previous(stage));
}

inline void check_gammas(const AllocationPath& path, const std::vector<int>& gammas) {
  if (gammas.size() != path.stages()) {
    throw DimensionError("need one realized misalignment per stage");
  }
}

inline Settlement settle_stage(const AllocationPath& path, const ReportTable& reports,
                               const TypeTable& truth, std::size_t stage, int gamma,
                               const PaymentOutcome& payment, const CostFunction& cost_fn,
                               const ProfitFunction& profit_fn) {
  AuctionResult round{path.winners[stage], path.runner_up[stage],
                      stage_reports(reports, stage, path.previous(stage))};
  auto s = settle_with_payment(round, true_stage_theta(path, truth, stage), gamma, payment,
                               cost_fn, profit_fn);
  s.stage = stage;
  return s;
}

/// Per-stage second-price settlement along a repeated-auction path.
inline std::vector<Settlement> settle_m1(const AllocationPath& path, const ReportTable& reports,
                                         const TypeTable& truth, const std::vector<int>& gammas,
                                         const PaymentRule& rule, const CostFunction& cost_fn,
                                         const ProfitFunction& profit_fn) {
  check_gammas(path, gammas);
  std::vector<Settlement> out;
  for (std::size_t k = 0; k < path.stages(); ++k) {
    PaymentInputs in{path.runner_up[k], path.winner_reports[k], gammas[k]};
    out.push_back(settle_stage(path, reports, truth, k, gammas[k],
                               pay(rule, in, cost_fn, profit_fn), cost_fn, profit_fn));
  }
  return out;
}

/// Lookahead settlement. Only defined for linear cost.
inline std::vector<Settlement> settle_m2(const AllocationPath& path, const ReportTable& reports,
                                         const TypeTable& truth, const std::vector<int>& gammas,
                                         const CostFunction& cost_fn,
                                         const ProfitFunction& profit_fn,
                                         M2Payment mode = M2Payment::corrected,
                                         const PaymentRule& gating = {}) {
  if (!cost_fn.is_linear()) {
    throw UnsupportedError("lookahead payments are only defined for linear cost");
  }
  check_gammas(path, gammas);
  std::vector<Settlement> out;
  for (std::size_t k = 0; k < path.stages(); ++k) {
    out.push_back(settle_stage(path, reports, truth, k, gammas[k],
                               m2_payment(path, reports, k, gammas[k], mode, gating), cost_fn,
                               profit_fn));
  }
  return out;
}

}  // namespace ordermech
