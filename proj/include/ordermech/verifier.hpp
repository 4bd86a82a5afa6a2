#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ordermech/agents.hpp"
#include "ordermech/mechanism.hpp"
#include "ordermech/oracle.hpp"

namespace ordermech {

enum class Property { ic, ir, so, gamma_independence, payment_props };
enum class Status { pass, fail, non_exhaustive };

inline std::string_view to_string(Property p) {
  switch (p) {
    case Property::ic: return "IC";
    case Property::ir: return "IR";
    case Property::so: return "SO";
    case Property::gamma_independence: return "gamma_independence";
    case Property::payment_props: return "payment_props";
  }
  return "?";
}

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::non_exhaustive: return "non_exhaustive";
  }
  return "?";
}

/// A counterexample. The meaning of `expected` / `observed` depends on kind:
///   ic                truthful utility / deviation utility
///   ir                0 / equilibrium utility of `agent` at `stage`
///   so                optimal welfare / mechanism welfare
///   gamma_dependence  utility at gamma 0 / utility at detail["gamma"]
///   no_overpay        cost / payment (payment exceeded cost)
///   win_incentive     0 / best margin found (no gamma made winning worthwhile)
struct Witness {
  std::string kind;
  MechanismKind mechanism = MechanismKind::indivisible;
  std::optional<TypeTable> truth;
  std::optional<ReportTable> reports;
  std::size_t agent = 0;
  std::size_t stage = 0;
  std::vector<int> gammas;
  Money expected;
  Money observed;
  nlohmann::json detail = nlohmann::json::object();

  [[nodiscard]] Money delta() const { return observed - expected; }
};

struct VerificationReport {
  Property property = Property::ic;
  Status status = Status::pass;
  std::string label;
  std::vector<Witness> witnesses;
  std::uint64_t instances_checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t evaluations = 0;

  [[nodiscard]] bool passed() const { return status == Status::pass; }
};

enum class TypeSpace { fixed, markov };

/// Exhaustive instance family: every agent's type row has entries in
/// [0, theta_max]; markov rows additionally satisfy tilde < hat.
struct GridSpec {
  std::size_t agents = 2;
  std::size_t stages = 1;
  int theta_max = 6;
  TypeSpace types = TypeSpace::fixed;
};

struct VerifyOptions {
  std::uint64_t budget = 2'000'000'000;
  std::size_t max_witnesses = 1000;
  GammaPolicy gamma_policy = GammaPolicy::social;
  bool best_response_reports = false;  // SO: agents best-respond instead of reporting truthfully
};

namespace detail {

inline std::vector<AgentRow> all_rows(ReportSpace space, std::size_t stages, int max) {
  std::vector<AgentRow> rows;
  for_each_row(space, stages, max, [&](const AgentRow& r) { rows.push_back(r); });
  return rows;
}

inline ReportSpace type_space(const GridSpec& g) {
  return g.types == TypeSpace::markov ? ReportSpace::markov : ReportSpace::fixed;
}

/// Reports an agent may submit when its type lives in `g`.
inline ReportSpace report_space(const MechanismConfig& cfg, const GridSpec& g) {
  if (cfg.kind == MechanismKind::m2) return ReportSpace::markov;
  return g.types == TypeSpace::fixed ? ReportSpace::fixed : ReportSpace::contingent;
}

/// Calls fn(rows) for every assignment of `pool` rows to `count` slots.
template <class Fn>
bool for_each_assignment(const std::vector<AgentRow>& pool, std::size_t count, Fn&& fn) {
  std::vector<std::size_t> idx(count, 0);
  const std::vector<std::size_t> limits(count, pool.size());
  std::vector<AgentRow> rows(count);
  do {
    for (std::size_t i = 0; i < count; ++i) rows[i] = pool[idx[i]];
    if (!fn(static_cast<const std::vector<AgentRow>&>(rows))) return false;
  } while (count > 0 && next_odometer(idx, limits));
  return true;
}

inline void record(VerificationReport& report, Witness w, const VerifyOptions& opt) {
  ++report.violations;
  report.status = Status::fail;
  if (report.witnesses.size() < opt.max_witnesses) report.witnesses.push_back(std::move(w));
}

inline void finish_budget(VerificationReport& report) {
  if (report.status == Status::pass) report.status = Status::non_exhaustive;
}

inline ReportTable with_row(ReportTable t, std::size_t agent, const AgentRow& row) {
  t.set_row(agent, row);
  return t;
}

}  // namespace detail

/// Best unilateral deviation of `agent` against a fixed profile of the other
/// agents' reports (the agent's own entry in `profile` is ignored). Returns an
/// IC witness when some deviation strictly beats truthful reporting. Among
/// the best deviations the one closest to the truth, then lexicographically
/// smallest, is reported.
inline std::optional<Witness> scan_deviations(const MechanismConfig& cfg, ReportTable profile,
                                              std::size_t agent, const AgentRow& truth_row,
                                              const std::vector<AgentRow>& candidates,
                                              std::uint64_t* evaluations = nullptr) {
  profile.set_row(agent, truth_row);
  const Payoff truthful = best_payoff(cfg, profile, agent, truth_row);
  if (evaluations) ++*evaluations;

  std::optional<Witness> best;
  int best_distance = 0;
  for (const auto& row : candidates) {
    if (row == truth_row) continue;
    profile.set_row(agent, row);
    Payoff dev = best_payoff(cfg, profile, agent, truth_row);
    if (evaluations) ++*evaluations;
    if (dev.utility <= truthful.utility) continue;
    const int distance = row_distance(row, truth_row);
    const bool better = !best || dev.utility > best->observed ||
                        (dev.utility == best->observed && distance < best_distance);
    if (!better) continue;
    Witness w;
    w.kind = "ic";
    w.mechanism = cfg.kind;
    w.reports = profile;
    w.agent = agent;
    w.gammas = dev.gammas;
    w.expected = truthful.utility;
    w.observed = std::move(dev.utility);
    best = std::move(w);
    best_distance = distance;
  }
  if (best) {
    // Other agents' types do not enter the deviator's utility; use their reports.
    std::vector<AgentRow> rows = profile.rows();
    rows[agent] = truth_row;
    best->truth = TypeTable(std::move(rows));
  }
  return best;
}

/// Dominant-strategy incentive compatibility: for every agent, every type in
/// the grid and every profile of the other agents' reports, no unilateral
/// deviation (report and realized misalignment) beats truthful reporting with
/// the best realized misalignment.
inline VerificationReport check_ic(const MechanismConfig& cfg, const GridSpec& grid,
                                   const VerifyOptions& opt = {}) {
  VerificationReport report;
  report.property = Property::ic;
  const auto types = detail::all_rows(detail::type_space(grid), grid.stages, grid.theta_max);
  const auto reports = detail::all_rows(detail::report_space(cfg, grid), grid.stages, grid.theta_max);

  std::vector<AgentRow> rows(grid.agents, types.front());
  ReportTable profile(rows);
  for (std::size_t agent = 0; agent < grid.agents; ++agent) {
    for (const auto& type : types) {
      bool within = detail::for_each_assignment(reports, grid.agents - 1, [&](const auto& others) {
        if (report.evaluations >= opt.budget) return false;
        for (std::size_t j = 0, o = 0; j < grid.agents; ++j) {
          if (j != agent) profile.set_row(j, others[o++]);
        }
        ++report.instances_checked;
        if (auto w = scan_deviations(cfg, profile, agent, type, reports, &report.evaluations)) {
          detail::record(report, std::move(*w), opt);
        }
        return true;
      });
      if (!within) {
        detail::finish_budget(report);
        return report;
      }
    }
  }
  return report;
}

/// Equilibrium-path reports: truthful, or each agent's best response to the
/// others reporting truthfully.
inline ReportTable equilibrium_reports(const MechanismConfig& cfg, const TypeTable& truth,
                                       int theta_max, bool best_response) {
  ReportTable truthful = truthful_reports(truth);
  if (!best_response) return truthful;
  std::vector<AgentRow> rows;
  AgentStrategy br{StrategyKind::best_response, {}, GammaPolicy::social};
  for (std::size_t i = 0; i < truth.agents(); ++i) {
    rows.push_back(choose_report(br, i, truth.row(i), truthful, cfg, theta_max,
                                 SearchBudget{~std::uint64_t{0}}));
  }
  return ReportTable(std::move(rows));
}

/// Individual rationality on the truthful path: every agent's utility at
/// every stage is non-negative.
inline VerificationReport check_ir(const MechanismConfig& cfg, const GridSpec& grid,
                                   const VerifyOptions& opt = {}) {
  VerificationReport report;
  report.property = Property::ir;
  const auto types = detail::all_rows(detail::type_space(grid), grid.stages, grid.theta_max);
  bool within = detail::for_each_assignment(types, grid.agents, [&](const auto& rows) {
    if (report.evaluations >= opt.budget) return false;
    TypeTable truth(rows);
    ReportTable reports = truthful_reports(truth);
    auto path = allocate(cfg, reports);
    auto gammas = choose_gammas(cfg, path, reports, truth, opt.gamma_policy);
    auto stages = settle_path(cfg, path, reports, truth, gammas);
    ++report.instances_checked;
    ++report.evaluations;
    for (const auto& s : stages) {
      for (std::size_t i = 0; i < grid.agents; ++i) {
        if (s.utilities[i].sign() >= 0) continue;
        Witness w;
        w.kind = "ir";
        w.mechanism = cfg.kind;
        w.truth = truth;
        w.reports = reports;
        w.agent = i;
        w.stage = s.stage;
        w.gammas = gammas;
        w.expected = 0;
        w.observed = s.utilities[i];
        detail::record(report, std::move(w), opt);
      }
    }
    return true;
  });
  if (!within) detail::finish_budget(report);
  return report;
}

/// Social optimality: mechanism welfare on the equilibrium path equals the
/// exhaustive optimum.
inline VerificationReport check_so(const MechanismConfig& cfg, const GridSpec& grid,
                                   const VerifyOptions& opt = {}) {
  VerificationReport report;
  report.property = Property::so;
  const auto types = detail::all_rows(detail::type_space(grid), grid.stages, grid.theta_max);
  bool within = detail::for_each_assignment(types, grid.agents, [&](const auto& rows) {
    if (report.evaluations >= opt.budget) return false;
    TypeTable truth(rows);
    ReportTable reports = equilibrium_reports(cfg, truth, grid.theta_max, opt.best_response_reports);
    auto path = allocate(cfg, reports);
    auto gammas = choose_gammas(cfg, path, reports, truth, opt.gamma_policy);
    Money welfare = total_welfare(settle_path(cfg, path, reports, truth, gammas));
    auto optimum = social_optimum(truth, cfg.cost, cfg.profit);
    ++report.instances_checked;
    ++report.evaluations;
    if (welfare != optimum.welfare) {
      Witness w;
      w.kind = "so";
      w.mechanism = cfg.kind;
      w.truth = truth;
      w.reports = reports;
      w.gammas = gammas;
      w.expected = optimum.welfare;
      w.observed = welfare;
      w.detail = {{"winners", path.winners}, {"optimal_winners", optimum.winners},
                  {"optimal_gammas", optimum.gammas}};
      detail::record(report, std::move(w), opt);
    }
    return true;
  });
  if (!within) detail::finish_budget(report);
  return report;
}

/// Truthful winners' utility must not depend on the realized misalignment.
inline VerificationReport check_gamma_independence(const MechanismConfig& cfg,
                                                   const GridSpec& grid,
                                                   const VerifyOptions& opt = {}) {
  VerificationReport report;
  report.property = Property::gamma_independence;
  const auto types = detail::all_rows(detail::type_space(grid), grid.stages, grid.theta_max);
  bool within = detail::for_each_assignment(types, grid.agents, [&](const auto& rows) {
    if (report.evaluations >= opt.budget) return false;
    TypeTable truth(rows);
    ReportTable reports = truthful_reports(truth);
    auto path = allocate(cfg, reports);
    ++report.instances_checked;
    for (std::size_t k = 0; k < path.stages(); ++k) {
      const auto& winner = truth.row(path.winners[k]);
      const int cap = gamma_cap(path, winner, k);
      const Money base = stage_utility(cfg, path, reports, winner, k, 0);
      for (int g = 1; g <= cap; ++g) {
        ++report.evaluations;
        Money u = stage_utility(cfg, path, reports, winner, k, g);
        if (u == base) continue;
        Witness w;
        w.kind = "gamma_dependence";
        w.mechanism = cfg.kind;
        w.truth = truth;
        w.reports = reports;
        w.agent = path.winners[k];
        w.stage = k;
        w.expected = base;
        w.observed = std::move(u);
        w.detail = {{"gamma", g}};
        detail::record(report, std::move(w), opt);
        break;
      }
    }
    return true;
  });
  if (!within) detail::finish_budget(report);
  return report;
}

/// Outcome of the two payment-property checks. `no_overpay`: whenever the
/// winner's true misalignment is at least the runner-up value, no payment
/// exceeds the cost. `win_incentive_true`: whenever it is strictly below, some
/// gamma <= theta makes the payment exceed the cost under a truthful report.
/// `win_incentive_any_report` relaxes the latter to any winning report.
struct PaymentPropertyReport {
  VerificationReport report;
  bool no_overpay = true;
  bool win_incentive_true = true;
  bool win_incentive_any_report = true;
};

inline PaymentPropertyReport check_payment_properties(const PaymentRule& rule,
                                                      const CostFunction& cost_fn,
                                                      const ProfitFunction& profit_fn,
                                                      int grid_max) {
  if (grid_max < 1) throw DomainError("payment property grid needs grid_max >= 1");
  PaymentPropertyReport out;
  auto& report = out.report;
  report.property = Property::payment_props;
  VerifyOptions opt;

  auto payment = [&](int bar, int reported, int g) -> std::optional<Money> {
    try {
      return pay(rule, {bar, reported, g}, cost_fn, profit_fn).amount;
    } catch (const DomainError&) {
      return std::nullopt;  // formula undefined at this point
    }
  };

  for (int bar = 0; bar <= grid_max; ++bar) {
    for (int theta = bar; theta <= grid_max; ++theta) {
      ++report.instances_checked;
      bool first = true;
      for (int reported = 0; reported <= bar && first; ++reported) {
        for (int g = 0; g <= theta && first; ++g) {
          auto p = payment(bar, reported, g);
          Money h = cost(cost_fn, theta, g);
          if (!p || *p <= h) continue;
          Witness w;
          w.kind = "no_overpay";
          w.expected = h;
          w.observed = *p;
          w.detail = {{"theta", theta}, {"theta_bar", bar}, {"theta_reported", reported}, {"gamma", g}};
          if (out.no_overpay) detail::record(report, std::move(w), opt);
          else ++report.violations;
          out.no_overpay = false;
          first = false;
        }
      }
    }
  }

  for (int bar = 1; bar <= grid_max; ++bar) {
    for (int theta = 0; theta < bar; ++theta) {
      ++report.instances_checked;
      std::optional<Money> margin;
      bool found_true = false;
      bool found_any = false;
      for (int reported = 0; reported <= bar; ++reported) {
        for (int g = 0; g <= std::min(theta, reported); ++g) {
          auto p = payment(bar, reported, g);
          if (!p) continue;
          Money m = *p - cost(cost_fn, theta, g);
          if (!margin || m > *margin) margin = m;
          if (m.sign() > 0) {
            found_any = true;
            if (reported == theta) found_true = true;
          }
        }
      }
      if (!found_any) out.win_incentive_any_report = false;
      if (found_true) continue;
      Witness w;
      w.kind = "win_incentive";
      w.expected = 0;
      w.observed = margin.value_or(Money(0));
      w.detail = {{"theta", theta}, {"theta_bar", bar}, {"any_winning_report", found_any}};
      if (out.win_incentive_true) detail::record(report, std::move(w), opt);
      else ++report.violations;
      out.win_incentive_true = false;
    }
  }
  report.label = std::string(to_string(rule.family));
  return out;
}

/// Local optimality conditions of a lookahead allocation. At every stage but
/// the last, the winner w either continues and
///   report(w, k) + tilde'(w, k+1) <= runner_up(k) + hat'(w, k+1),
/// or hands over and report(w, k) <= runner_up(k). The last stage goes to an
/// argmin of the effective reports. Ties make both inequalities weak.
inline bool dp_conditions_hold(const ReportTable& reports, const AllocationPath& path) {
  const auto stages = path.stages();
  for (std::size_t k = 0; k + 1 < stages; ++k) {
    const auto w = path.winners[k];
    const int own = path.winner_reports[k];
    if (path.continues(k)) {
      if (own + reports.tilde(w, k + 1) > path.runner_up[k] + reports.hat(w, k + 1)) return false;
    } else if (own > path.runner_up[k]) {
      return false;
    }
  }
  const auto last = stage_reports(reports, stages - 1, path.previous(stages - 1));
  return path.winner_reports[stages - 1] == *std::min_element(last.begin(), last.end());
}

/// Re-runs the mechanism on a witness and checks the recorded numbers.
inline bool replay(const MechanismConfig& cfg, const Witness& w,
                   const PaymentRule* rule_for_payment = nullptr) {
  if (w.kind == "no_overpay" || w.kind == "win_incentive") {
    if (!rule_for_payment) return false;
    const int theta = w.detail.at("theta");
    const int bar = w.detail.at("theta_bar");
    if (w.kind == "no_overpay") {
      const int g = w.detail.at("gamma");
      Money p = pay(*rule_for_payment, {bar, w.detail.at("theta_reported").get<int>(), g}, cfg.cost,
                    cfg.profit)
                    .amount;
      return p == w.observed && cost(cfg.cost, theta, g) == w.expected && p > w.expected;
    }
    for (int g = 0; g <= theta; ++g) {
      Money m = pay(*rule_for_payment, {bar, theta, g}, cfg.cost, cfg.profit).amount -
                cost(cfg.cost, theta, g);
      if (m.sign() > 0) return false;
    }
    return true;
  }

  if (!w.truth || !w.reports) return false;
  const auto& truth = *w.truth;
  const auto& reports = *w.reports;
  auto path = allocate(cfg, reports);

  if (w.kind == "ic") {
    auto stages = settle_path(cfg, path, reports, truth, w.gammas);
    Money deviation = total_utility(stages, w.agent);
    Money truthful =
        best_payoff(cfg, detail::with_row(reports, w.agent, truth.row(w.agent)), w.agent,
                    truth.row(w.agent))
            .utility;
    return deviation == w.observed && truthful == w.expected && deviation > truthful;
  }
  if (w.kind == "ir") {
    auto stages = settle_path(cfg, path, reports, truth, w.gammas);
    return stages.at(w.stage).utilities.at(w.agent) == w.observed && w.observed.sign() < 0;
  }
  if (w.kind == "so") {
    Money welfare = total_welfare(settle_path(cfg, path, reports, truth, w.gammas));
    Money optimum = social_optimum(truth, cfg.cost, cfg.profit).welfare;
    return welfare == w.observed && optimum == w.expected && welfare != optimum;
  }
  if (w.kind == "gamma_dependence") {
    const auto& winner = truth.row(path.winners.at(w.stage));
    Money u0 = stage_utility(cfg, path, reports, winner, w.stage, 0);
    Money ug = stage_utility(cfg, path, reports, winner, w.stage, w.detail.at("gamma").get<int>());
    return u0 == w.expected && ug == w.observed && u0 != ug;
  }
  return false;
}

}  // namespace ordermech
