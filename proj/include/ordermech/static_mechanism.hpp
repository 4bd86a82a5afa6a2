#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ordermech/econ.hpp"
#include "ordermech/error.hpp"
#include "ordermech/money.hpp"

namespace ordermech {

/// Outcome of the reverse auction. Agents are indexed from zero.
struct AuctionResult {
  std::size_t winner = 0;
  int theta_bar = 0;  // lowest report among the other agents
  std::vector<int> reports;
};

/// Lowest report wins, ties to the lowest index. The runner-up value is the
/// minimum over everyone else and equals the winning report on a tie.
inline AuctionResult select_winner(std::span<const int> reports) {
  if (reports.size() < 2) {
    throw InsufficientAgentsError("insufficient agents: need at least 2 bids, got " +
                                  std::to_string(reports.size()));
  }
  AuctionResult r;
  r.reports.assign(reports.begin(), reports.end());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i] < 0) throw DomainError("reports must be non-negative");
    if (reports[i] < reports[r.winner]) r.winner = i;
  }
  bool first = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i == r.winner) continue;
    if (first || reports[i] < r.theta_bar) r.theta_bar = reports[i];
    first = false;
  }
  return r;
}

/// Money flows of one stage (or of the single indivisible round).
struct Settlement {
  std::size_t stage = 0;
  std::size_t winner = 0;
  int theta_bar = 0;
  int theta_true = 0;      // winner's true misalignment at this stage
  int theta_reported = 0;  // winner's report at this stage
  int gamma = 0;
  std::vector<Money> payments;   // per agent; zero for non-winners
  std::vector<Money> utilities;  // per agent
  Money principal;               // V = S(gamma) - sum of payments
  Money welfare;                 // Pi = S(gamma) - h(theta, gamma)
  bool gated = false;            // payment forfeited: gamma exceeded the report

  [[nodiscard]] const Money& payment() const { return payments[winner]; }
};

/// Settles one round given the realized misalignment `gamma` of the winner.
/// Non-winners are neither paid nor charged.
inline Settlement settle_with_payment(const AuctionResult& result, int true_theta, int gamma,
                                      const PaymentOutcome& payment, const CostFunction& cost_fn,
                                      const ProfitFunction& profit_fn) {
  if (gamma < 0) throw DomainError("realized misalignment must be non-negative");
  if (gamma > true_theta) {
    throw DomainError("realized misalignment " + std::to_string(gamma) +
                      " exceeds the true initial misalignment " + std::to_string(true_theta));
  }
  const auto n = result.reports.size();
  Settlement s;
  s.winner = result.winner;
  s.theta_bar = result.theta_bar;
  s.theta_true = true_theta;
  s.theta_reported = result.reports[result.winner];
  s.gamma = gamma;
  s.gated = payment.gated;
  s.payments.assign(n, Money(0));
  s.utilities.assign(n, Money(0));

  const Money h = cost(cost_fn, true_theta, gamma);
  const Money gain = profit(profit_fn, gamma);
  s.payments[s.winner] = payment.amount;
  s.utilities[s.winner] = payment.amount - h;
  s.principal = gain - payment.amount;
  s.welfare = gain - h;
  return s;
}

inline Settlement settle(const AuctionResult& result, int true_theta, int gamma,
                         const PaymentRule& rule, const CostFunction& cost_fn,
                         const ProfitFunction& profit_fn) {
  PaymentInputs in{result.theta_bar, result.reports.at(result.winner), gamma};
  return settle_with_payment(result, true_theta, gamma, pay(rule, in, cost_fn, profit_fn),
                             cost_fn, profit_fn);
}

}  // namespace ordermech
