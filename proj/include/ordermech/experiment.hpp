#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordermech/io.hpp"
#include "ordermech/oracle.hpp"
#include "ordermech/run.hpp"
#include "ordermech/scenario.hpp"
#include "ordermech/verifier.hpp"

namespace ordermech {

/// Exit codes shared by every subcommand.
inline int exit_code(Status s) {
  switch (s) {
    case Status::pass: return 0;
    case Status::fail: return 1;
    case Status::non_exhaustive: return 2;
  }
  return 1;
}

/// fail beats non_exhaustive beats pass.
inline Status combine(Status a, Status b) {
  if (a == Status::fail || b == Status::fail) return Status::fail;
  if (a == Status::non_exhaustive || b == Status::non_exhaustive) return Status::non_exhaustive;
  return Status::pass;
}

struct ExperimentResult {
  std::string csv;
  nlohmann::json summary;
  int exit_code = 0;
};

namespace detail {

inline std::vector<AgentStrategy> strategies_for(const Scenario& sc, std::size_t agents) {
  std::vector<AgentStrategy> out;
  for (std::size_t i = 0; i < agents; ++i) {
    out.push_back(i < sc.agents.size() ? sc.agents[i].strategy : sc.default_strategy);
  }
  return out;
}

template <class Fn>
void for_each_scenario_instance(const Scenario& sc, Fn&& fn) {
  if (sc.types) {
    fn(*sc.types);
  } else if (sc.generate) {
    for_each_instance(sc.seed, *sc.generate, [&](TypeTable t) {
      if (sc.config.kind == MechanismKind::m2) check_markov(t, sc.id);
      fn(t);
      return true;
    });
  }
}

/// Realized misalignment imposed by a scenario's realized order, if any.
inline std::optional<int> fixed_gamma(const Scenario& sc, std::size_t agent) {
  if (agent >= sc.agents.size() || !sc.agents[agent].realized || !sc.principal) return std::nullopt;
  return footrule(*sc.principal, *sc.agents[agent].realized).total;
}

inline std::string csv_header(std::size_t agents) {
  std::string h = "scenario_id,instance_id,stage,winner,theta_true_w,theta_reported_w,theta_bar,gamma,payment";
  for (std::size_t i = 0; i < agents; ++i) h += ",U_" + std::to_string(i + 1);
  return h + ",V,Pi,Pi_star,flags\n";
}

}  // namespace detail

/// Runs the verify block of a scenario (empty array when there is none).
inline nlohmann::json run_verification(const Scenario& sc, Status& status) {
  nlohmann::json out = nlohmann::json::array();
  if (!sc.verify) return out;
  const auto& v = *sc.verify;
  VerifyOptions opt = v.options;
  opt.budget = sc.verify_budget;
  for (const auto& check : v.checks) {
    if (check == "payment") {
      auto p = check_payment_properties(sc.config.rule, sc.config.cost, sc.config.profit, v.grid_max);
      status = combine(status, p.report.status);
      out.push_back(to_json_value(p));
      continue;
    }
    VerificationReport r;
    if (check == "ic") r = check_ic(sc.config, v.grid, opt);
    else if (check == "ir") r = check_ir(sc.config, v.grid, opt);
    else if (check == "so") r = check_so(sc.config, v.grid, opt);
    else r = check_gamma_independence(sc.config, v.grid, opt);
    status = combine(status, r.status);
    out.push_back(to_json_value(r));
  }
  return out;
}

/// Executes every instance of a scenario: reports, allocation, realized
/// misalignments, settlement, the welfare oracle and a unilateral deviation
/// scan against truthful opponents. Optional grid verification follows.
inline ExperimentResult run_experiment(const Scenario& sc) {
  ExperimentResult out;
  std::ostringstream csv;
  bool header = false;

  Status ic = Status::pass;
  Status ir = Status::pass;
  Status so = Status::pass;
  Money welfare_mechanism;
  Money welfare_oracle;
  bool oracle_complete = true;
  Money payment_total;
  Money principal_total;
  std::vector<Money> utility_totals;
  nlohmann::json results = nlohmann::json::array();
  std::size_t instance_id = 0;
  std::size_t rows = 0;

  detail::for_each_scenario_instance(sc, [&](const TypeTable& truth) {
    ++instance_id;
    const auto n = truth.agents();
    if (!header) {
      csv << detail::csv_header(n);
      utility_totals.assign(n, Money(0));
      header = true;
    }
    const auto strategies = detail::strategies_for(sc, n);
    RunResult run_result;
    try {
      run_result = run(sc.config, truth, strategies, sc.theta_max, SearchBudget{sc.search_budget});
      bool overridden = false;
      for (std::size_t k = 0; k < run_result.path.stages(); ++k) {
        if (auto g = detail::fixed_gamma(sc, run_result.path.winners[k])) {
          run_result.gammas[k] = *g;
          overridden = true;
        }
      }
      if (overridden) {
        run_result.stages = settle_path(sc.config, run_result.path, run_result.reports, truth,
                                        run_result.gammas);
      }
    } catch (const Error& e) {
      throw Error(sc.id + " instance " + std::to_string(instance_id) + ": " + e.what());
    }

    std::optional<SocialOptimum> optimum;
    try {
      optimum = social_optimum(truth, sc.config.cost, sc.config.profit);
    } catch (const BudgetError&) {
      oracle_complete = false;
    }

    // Deviation scan with every other agent truthful.
    nlohmann::json witnesses = nlohmann::json::array();
    const ReportTable truthful = truthful_reports(truth);
    for (std::size_t i = 0; i < n; ++i) {
      const auto space = default_space(sc.config, truth.row(i));
      if (row_count(space, truth.stages(), sc.theta_max) > sc.search_budget) {
        ic = combine(ic, Status::non_exhaustive);
        continue;
      }
      std::vector<AgentRow> candidates;
      for_each_row(space, truth.stages(), sc.theta_max,
                   [&](const AgentRow& r) { candidates.push_back(r); });
      if (auto w = scan_deviations(sc.config, truthful, i, truth.row(i), candidates)) {
        ic = Status::fail;
        witnesses.push_back(to_json_value(*w));
      }
    }

    Money instance_welfare;
    nlohmann::json settlements = nlohmann::json::array();
    for (const auto& s : run_result.stages) {
      std::string flags;
      auto flag = [&](const char* f) { flags += flags.empty() ? f : std::string("|") + f; };
      if (s.gated) flag("gated");
      bool negative = false;
      for (const auto& u : s.utilities) negative = negative || u.sign() < 0;
      if (negative) {
        flag("ir_violation");
        ir = Status::fail;
      }
      if (detail::fixed_gamma(sc, s.winner)) flag("gamma_from_realized_order");

      csv << sc.id << ',' << instance_id << ',' << s.stage + 1 << ',' << s.winner + 1 << ','
          << s.theta_true << ',' << s.theta_reported << ',' << s.theta_bar << ',' << s.gamma << ','
          << s.payment().decimal();
      for (std::size_t i = 0; i < n; ++i) {
        csv << ',' << s.utilities[i].decimal();
        utility_totals[i] += s.utilities[i];
      }
      csv << ',' << s.principal.decimal() << ',' << s.welfare.decimal() << ','
          << (optimum ? optimum->stage_welfare[s.stage].decimal() : std::string()) << ','
          << flags << '\n';
      ++rows;
      instance_welfare += s.welfare;
      payment_total += s.payment();
      principal_total += s.principal;
      settlements.push_back(to_json_value(s));
    }
    welfare_mechanism += instance_welfare;

    nlohmann::json entry = {{"instance_id", instance_id},
                            {"types", to_json_value(truth)},
                            {"reports", to_json_value(run_result.reports)},
                            {"winners", ids_json(run_result.path.winners)},
                            {"gammas", run_result.gammas},
                            {"welfare", instance_welfare.str()},
                            {"settlements", settlements},
                            {"ic_witnesses", witnesses}};
    if (optimum) {
      welfare_oracle += optimum->welfare;
      entry["welfare_oracle"] = optimum->welfare.str();
      entry["oracle_winners"] = ids_json(optimum->winners);
      entry["oracle_gammas"] = optimum->gammas;
      if (instance_welfare != optimum->welfare) so = Status::fail;
    } else {
      so = combine(so, Status::non_exhaustive);
    }
    results.push_back(std::move(entry));
  });

  Status overall = combine(combine(ic, ir), so);
  nlohmann::json verification = run_verification(sc, overall);

  nlohmann::json utilities = nlohmann::json::array();
  for (const auto& u : utility_totals) utilities.push_back(u.str());
  auto& j = out.summary;
  j["scenario_id"] = sc.id;
  j["mode"] = to_string(sc.config.kind);
  j["seed"] = sc.seed;
  j["instances"] = instance_id;
  j["rows"] = rows;
  j["welfare_mechanism"] = welfare_mechanism.str();
  j["welfare_oracle"] = oracle_complete ? nlohmann::json(welfare_oracle.str()) : nlohmann::json();
  j["payment_total"] = payment_total.str();
  j["principal_total"] = principal_total.str();
  j["utility_totals"] = utilities;
  j["ic_status"] = to_string(ic);
  j["ir_status"] = to_string(ir);
  j["so_status"] = to_string(so);
  j["results"] = std::move(results);
  j["verification"] = std::move(verification);

  if (sc.principal) {
    nlohmann::json misalignments = nlohmann::json::array();
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
      const auto& a = sc.agents[i];
      if (!a.priority) continue;
      auto m = footrule(*sc.principal, *a.priority);
      nlohmann::json e = {{"agent", i + 1}, {"per_task", m.per_task}, {"theta", m.total}};
      if (a.realized) {
        auto z = footrule(*sc.principal, *a.realized);
        e["gamma_per_task"] = z.per_task;
        e["gamma"] = z.total;
      }
      misalignments.push_back(std::move(e));
    }
    j["misalignments"] = std::move(misalignments);
  }

  out.csv = csv.str();
  out.exit_code = exit_code(overall);
  return out;
}

/// Writes <dir>/<id>.csv and <dir>/<id>.json.
inline void write_outputs(const ExperimentResult& r, const std::string& id,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (id + ".csv"), std::ios::binary);
  std::ofstream js(dir / (id + ".json"), std::ios::binary);
  if (!csv || !js) throw Error("cannot write outputs under " + dir.string());
  csv << r.csv;
  js << r.summary.dump(2) << '\n';
}

/// Verification only: the scenario's verify block.
inline ExperimentResult verify_scenario(const Scenario& sc) {
  if (!sc.verify) throw ConfigError(sc.id + ": no 'verify' block");
  ExperimentResult out;
  Status status = Status::pass;
  out.summary = {{"scenario_id", sc.id}, {"mode", to_string(sc.config.kind)}};
  out.summary["reports"] = run_verification(sc, status);
  out.summary["status"] = to_string(status);
  out.exit_code = exit_code(status);
  return out;
}

/// Welfare oracle for every instance of a scenario.
inline nlohmann::json oracle_scenario(const Scenario& sc) {
  nlohmann::json rows = nlohmann::json::array();
  std::size_t id = 0;
  detail::for_each_scenario_instance(sc, [&](const TypeTable& truth) {
    auto opt = social_optimum(truth, sc.config.cost, sc.config.profit, sc.verify_budget);
    nlohmann::json stage = nlohmann::json::array();
    for (const auto& w : opt.stage_welfare) stage.push_back(w.str());
    rows.push_back({{"instance_id", ++id},
                    {"types", to_json_value(truth)},
                    {"winners", ids_json(opt.winners)},
                    {"gammas", opt.gammas},
                    {"stage_welfare", stage},
                    {"Pi_star", opt.welfare.str()}});
  });
  return {{"scenario_id", sc.id}, {"instances", rows}};
}

/// Sets a dotted path ("profit.slope", "agents.0.theta") in a JSON document.
inline void set_dotted(nlohmann::json& j, const std::string& dotted, const nlohmann::json& value) {
  std::string pointer;
  std::stringstream parts(dotted);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("empty component in parameter path '" + dotted + "'");
    pointer += "/" + part;
  }
  try {
    j[nlohmann::json::json_pointer(pointer)] = value;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot set '" + dotted + "': " + e.what());
  }
}

struct SweepPoint {
  long value = 0;
  ExperimentResult result;
};

/// Re-runs a scenario for every integer value of one parameter in [lo, hi].
/// Rational-valued parameters (written as strings) receive "v" strings.
inline std::vector<SweepPoint> sweep(const Scenario& base, const std::string& param, long lo,
                                     long hi) {
  if (hi < lo) throw DomainError("sweep range is empty");
  std::vector<SweepPoint> out;
  for (long v = lo; v <= hi; ++v) {
    nlohmann::json doc = base.source;
    nlohmann::json value = v;
    try {
      const auto& current = doc.at(nlohmann::json::json_pointer("/" + [&] {
        std::string p = param;
        for (auto& c : p) c = c == '.' ? '/' : c;
        return p;
      }()));
      if (current.is_string()) value = std::to_string(v);
    } catch (const nlohmann::json::exception&) {
      // New field: keep the integer.
    }
    set_dotted(doc, param, value);
    doc["id"] = base.id + "_" + param + "_" + std::to_string(v);
    Scenario sc = parse_scenario(doc, base.id);
    sc.search_budget = base.search_budget;
    sc.verify_budget = base.verify_budget;
    out.push_back({v, run_experiment(sc)});
  }
  return out;
}

inline std::string sweep_table(const std::string& param, const std::vector<SweepPoint>& points) {
  std::ostringstream t;
  t << param << ",welfare_mechanism,welfare_oracle,ic_status,ir_status,so_status,exit_code\n";
  for (const auto& p : points) {
    const auto& s = p.result.summary;
    const auto oracle = s["welfare_oracle"].is_null() ? std::string() : s["welfare_oracle"].get<std::string>();
    t << p.value << ',' << s["welfare_mechanism"].get<std::string>() << ',' << oracle << ','
      << s["ic_status"].get<std::string>() << ',' << s["ir_status"].get<std::string>() << ','
      << s["so_status"].get<std::string>() << ',' << p.result.exit_code << '\n';
  }
  return t.str();
}

/// The worked example: principal order [1,2,3,4], agent order [2,1,4,3],
/// realized order [1,2,4,3]; a second agent prefers the reversed order.
inline nlohmann::json example1_source() {
  return {{"id", "example1"},
          {"mode", "indivisible"},
          {"principal", {1, 2, 3, 4}},
          {"agents",
           {{{"priority", {2, 1, 4, 3}}, {"realized", {1, 2, 4, 3}}, {"strategy", "truthful"}},
            {{"priority", {4, 3, 2, 1}}, {"strategy", "truthful"}}}},
          {"payment", {{"family", "second_price_linear"}}},
          {"cost", {{"family", "linear"}}},
          {"profit", {{"family", "affine"}, {"intercept", "10"}, {"slope", "2"}}},
          {"tie_break", "social"},
          {"seed", 1}};
}

}  // namespace ordermech
