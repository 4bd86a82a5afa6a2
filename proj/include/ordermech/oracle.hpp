#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordermech/econ.hpp"
#include "ordermech/error.hpp"
#include "ordermech/tables.hpp"

namespace ordermech {

namespace detail {

/// Advances an odometer with digit i in [0, limits[i]); false after the last.
inline bool next_odometer(std::vector<std::size_t>& digits, const std::vector<std::size_t>& limits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < limits[i]) return true;
    digits[i] = 0;
  }
  return false;
}

inline int markov_theta(const TypeTable& truth, const std::vector<std::size_t>& winners,
                        std::size_t stage) {
  const auto w = winners[stage];
  if (stage > 0 && winners[stage - 1] == w) return truth.tilde(w, stage);
  return truth.hat(w, stage);
}

}  // namespace detail

struct SocialOptimum {
  std::vector<std::size_t> winners;
  std::vector<int> gammas;
  Money welfare;
  std::vector<Money> stage_welfare;
};

/// Exhaustive welfare maximization over every winner sequence and every
/// feasible realized misalignment per stage (0 <= gamma <= true theta).
/// Returns the lexicographically first maximizer in (winners, gammas) order.
inline SocialOptimum social_optimum(const TypeTable& truth, const CostFunction& cost_fn,
                                    const ProfitFunction& profit_fn,
                                    std::uint64_t budget = 100'000'000) {
  const auto n = truth.agents();
  const auto stages = truth.stages();
  if (n == 0 || stages == 0) throw DimensionError("social optimum of an empty instance");

  long double estimate = 1;
  for (std::size_t k = 0; k < stages; ++k) {
    estimate *= static_cast<long double>(n) * (truth.max_entry() + 1);
  }
  if (estimate > static_cast<long double>(budget)) {
    throw BudgetError("social optimum enumeration exceeds budget of " + std::to_string(budget));
  }

  std::optional<SocialOptimum> best;
  std::vector<std::size_t> winners(stages, 0);
  const std::vector<std::size_t> agent_limits(stages, n);
  do {
    std::vector<int> theta(stages);
    std::vector<std::size_t> gamma_limits(stages);
    for (std::size_t k = 0; k < stages; ++k) {
      theta[k] = detail::markov_theta(truth, winners, k);
      gamma_limits[k] = static_cast<std::size_t>(theta[k]) + 1;
    }
    std::vector<std::size_t> gammas(stages, 0);
    do {
      std::vector<Money> parts(stages);
      Money total;
      for (std::size_t k = 0; k < stages; ++k) {
        const int g = static_cast<int>(gammas[k]);
        parts[k] = profit(profit_fn, g) - cost(cost_fn, theta[k], g);
        total += parts[k];
      }
      if (!best || total > best->welfare) {
        best = SocialOptimum{winners, std::vector<int>(gammas.begin(), gammas.end()), total,
                             std::move(parts)};
      }
    } while (detail::next_odometer(gammas, gamma_limits));
  } while (detail::next_odometer(winners, agent_limits));
  return *best;
}

/// Every winner sequence with its total effective misalignment, in
/// lexicographic order. Reference for the lookahead allocation.
inline std::vector<std::pair<std::vector<std::size_t>, int>> enumerate_paths(
    const TypeTable& table) {
  const auto n = table.agents();
  const auto stages = table.stages();
  std::vector<std::pair<std::vector<std::size_t>, int>> out;
  std::vector<std::size_t> winners(stages, 0);
  const std::vector<std::size_t> limits(stages, n);
  do {
    int total = 0;
    for (std::size_t k = 0; k < stages; ++k) total += detail::markov_theta(table, winners, k);
    out.emplace_back(winners, total);
  } while (detail::next_odometer(winners, limits));
  return out;
}

}  // namespace ordermech
