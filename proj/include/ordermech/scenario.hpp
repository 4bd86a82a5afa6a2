#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordermech/agents.hpp"
#include "ordermech/error.hpp"
#include "ordermech/generator.hpp"
#include "ordermech/mechanism.hpp"
#include "ordermech/rank.hpp"
#include "ordermech/verifier.hpp"

namespace ordermech {

struct AgentSpec {
  AgentStrategy strategy;
  std::optional<PriorityOrder> priority;  // preferred order Y
  std::optional<PriorityOrder> realized;  // realized order Z; fixes gamma when the agent wins
};

struct VerifySpec {
  std::vector<std::string> checks;  // ic, ir, so, gamma, payment
  GridSpec grid;
  VerifyOptions options;
  int grid_max = 10;  // payment-property grid
};

struct Scenario {
  std::string id = "scenario";
  MechanismConfig config;
  std::uint64_t seed = 0;
  int theta_max = 0;
  std::vector<AgentSpec> agents;
  AgentStrategy default_strategy;
  std::optional<PriorityOrder> principal;
  std::optional<TypeTable> types;
  std::optional<GeneratorSpec> generate;
  std::optional<VerifySpec> verify;
  std::uint64_t search_budget = 1'000'000;
  std::uint64_t verify_budget = 100'000'000;
  nlohmann::json source;
};

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": unexpected value " + j.dump());
  }
}

inline Money money(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Money(j.get<long>());
  if (!j.is_string()) throw ParseError(where + ": expected a rational written as \"p/q\"");
  try {
    return Money::parse(j.get<std::string>());
  } catch (const Error&) {
    throw ParseError(where + ": cannot parse rational '" + j.get<std::string>() + "'");
  } catch (const std::exception&) {
    throw ParseError(where + ": cannot parse rational '" + j.get<std::string>() + "'");
  }
}

inline Money money_or(const json& j, const std::string& key, Money fallback,
                      const std::string& where) {
  return j.contains(key) ? money(j.at(key), where + "." + key) : fallback;
}

inline CostFunction parse_cost(const json& j, const std::string& where) {
  CostFunction c;
  c.family = cost_family_from(get_as<std::string>(field(j, "family", where), where + ".family"));
  c.scale = money_or(j, "scale", 1, where);
  validate(c);
  return c;
}

inline ProfitFunction parse_profit(const json& j, const std::string& where) {
  ProfitFunction s;
  s.family = profit_family_from(get_as<std::string>(field(j, "family", where), where + ".family"));
  if (s.family == ProfitFamily::affine) {
    s.intercept = money_or(j, "intercept", 0, where);
    s.slope = money_or(j, "slope", 1, where);
  } else {
    const auto& values = field(j, "values", where);
    for (std::size_t g = 0; g < values.size(); ++g) {
      s.values.push_back(money(values[g], where + ".values[" + std::to_string(g) + "]"));
    }
  }
  validate(s);
  return s;
}

inline PaymentRule parse_payment(const json& j, const std::string& where) {
  PaymentRule r;
  r.family =
      payment_family_from(get_as<std::string>(field(j, "family", where), where + ".family"));
  r.scale = money_or(j, "scale", 1, where);
  r.base = money_or(j, "base", 0, where);
  r.slope = money_or(j, "slope", 1, where);
  if (j.contains("optimal_welfare")) {
    r.optimal_welfare = money(j.at("optimal_welfare"), where + ".optimal_welfare");
  }
  if (j.contains("table")) {
    const auto& t = j.at("table");
    for (std::size_t a = 0; a < t.size(); ++a) {
      std::vector<Money> row;
      for (std::size_t b = 0; b < t[a].size(); ++b) {
        row.push_back(money(t[a][b], where + ".table[" + std::to_string(a) + "][" +
                                         std::to_string(b) + "]"));
      }
      r.table.push_back(std::move(row));
    }
  }
  if (j.contains("gating")) r.gating = get_as<bool>(j.at("gating"), where + ".gating");
  if (j.contains("gating_mode")) {
    const auto mode = get_as<std::string>(j.at("gating_mode"), where + ".gating_mode");
    if (mode == "forfeit") r.gating_mode = GatingMode::forfeit;
    else if (mode == "penalty") r.gating_mode = GatingMode::penalty;
    else throw ParseError(where + ".gating_mode: expected forfeit or penalty");
  }
  r.penalty = money_or(j, "penalty", 0, where);
  if (r.family == PaymentFamily::remark4_vcg && !r.optimal_welfare) {
    throw ConfigError(where + ": remark4_vcg needs optimal_welfare");
  }
  return r;
}

inline AgentStrategy parse_strategy(const json& j, GammaPolicy policy, const std::string& where) {
  AgentStrategy s;
  s.gamma_policy = policy;
  if (j.is_string()) {
    s.kind = strategy_kind_from(j.get<std::string>());
    return s;
  }
  s.kind = strategy_kind_from(get_as<std::string>(field(j, "kind", where), where + ".kind"));
  if (j.contains("offsets")) s.offsets = get_as<std::vector<int>>(j.at("offsets"), where + ".offsets");
  if (j.contains("gamma_policy")) {
    s.gamma_policy = gamma_policy_from(get_as<std::string>(j.at("gamma_policy"), where + ".gamma_policy"));
  }
  return s;
}

inline GridSpec parse_grid(const json& j, const std::string& where) {
  GridSpec g;
  if (j.contains("agents")) g.agents = get_as<std::size_t>(j.at("agents"), where + ".agents");
  if (j.contains("stages")) g.stages = get_as<std::size_t>(j.at("stages"), where + ".stages");
  if (j.contains("theta_max")) g.theta_max = get_as<int>(j.at("theta_max"), where + ".theta_max");
  if (j.contains("types")) {
    const auto t = get_as<std::string>(j.at("types"), where + ".types");
    if (t == "fixed") g.types = TypeSpace::fixed;
    else if (t == "markov") g.types = TypeSpace::markov;
    else throw ParseError(where + ".types: expected fixed or markov");
  }
  if (g.agents < 2) throw InsufficientAgentsError(where + ": insufficient agents (need at least 2)");
  return g;
}

inline GeneratorSpec parse_generate(const json& j, const std::string& where) {
  GeneratorSpec g;
  g.mode = generate_mode_from(get_as<std::string>(field(j, "mode", where), where + ".mode"));
  const GridSpec grid = parse_grid(j, where);
  g.agents = grid.agents;
  g.stages = grid.stages;
  g.theta_max = j.contains("theta_max") ? grid.theta_max : 3;
  g.types = grid.types;
  if (j.contains("count")) g.count = get_as<std::size_t>(j.at("count"), where + ".count");
  if (j.contains("tasks")) g.tasks = get_as<std::size_t>(j.at("tasks"), where + ".tasks");
  return g;
}

inline void check_markov(const TypeTable& t, const std::string& where) {
  if (auto bad = t.markov_violation()) {
    throw ValidationError(where + ": agent " + std::to_string(bad->first + 1) + " stage " +
                          std::to_string(bad->second + 1) +
                          ": Markov type reduction violated (tilde must be < hat)");
  }
}

}  // namespace detail

/// Builds a validated scenario from parsed JSON. `where` prefixes diagnostics.
inline Scenario parse_scenario(const nlohmann::json& j, const std::string& where = "scenario") {
  using detail::field;
  using detail::get_as;
  if (!j.is_object()) throw ParseError(where + ": top level must be an object");

  Scenario sc;
  sc.source = j;
  if (j.contains("id")) sc.id = get_as<std::string>(j.at("id"), where + ".id");
  sc.config.kind = mechanism_kind_from(get_as<std::string>(field(j, "mode", where), where + ".mode"));
  if (j.contains("payment")) sc.config.rule = detail::parse_payment(j.at("payment"), where + ".payment");
  if (j.contains("cost")) sc.config.cost = detail::parse_cost(j.at("cost"), where + ".cost");
  if (j.contains("profit")) sc.config.profit = detail::parse_profit(j.at("profit"), where + ".profit");
  if (j.contains("m2_payment")) {
    const auto m = get_as<std::string>(j.at("m2_payment"), where + ".m2_payment");
    if (m == "corrected") sc.config.m2_payment = M2Payment::corrected;
    else if (m == "literal") sc.config.m2_payment = M2Payment::literal;
    else throw ParseError(where + ".m2_payment: expected corrected or literal");
  }
  if (sc.config.kind == MechanismKind::m2 && !sc.config.cost.is_linear()) {
    throw UnsupportedError(where + ": the lookahead mechanism is defined for linear cost only");
  }
  if (j.contains("seed")) sc.seed = get_as<std::uint64_t>(j.at("seed"), where + ".seed");
  if (j.contains("budget")) sc.search_budget = get_as<std::uint64_t>(j.at("budget"), where + ".budget");

  GammaPolicy tie_break = GammaPolicy::social;
  if (j.contains("tie_break")) {
    tie_break = gamma_policy_from(get_as<std::string>(j.at("tie_break"), where + ".tie_break"));
  }
  sc.default_strategy.gamma_policy = tie_break;
  if (j.contains("strategy")) {
    sc.default_strategy = detail::parse_strategy(j.at("strategy"), tie_break, where + ".strategy");
  }
  if (j.contains("principal")) {
    sc.principal = PriorityOrder(get_as<std::vector<int>>(j.at("principal"), where + ".principal"));
  }

  int derived_max = 0;
  std::vector<std::vector<int>> theta;
  bool any_theta = false;
  if (j.contains("agents")) {
    const auto& agents = j.at("agents");
    if (!agents.is_array()) throw ParseError(where + ".agents: expected an array");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string at = where + ".agents[" + std::to_string(i) + "]";
      const auto& a = agents[i];
      AgentSpec spec;
      spec.strategy = sc.default_strategy;
      if (a.contains("strategy")) spec.strategy = detail::parse_strategy(a.at("strategy"), tie_break, at + ".strategy");
      if (a.contains("gamma_policy")) {
        spec.strategy.gamma_policy = gamma_policy_from(get_as<std::string>(a.at("gamma_policy"), at + ".gamma_policy"));
      }
      if (a.contains("priority")) {
        if (!sc.principal) throw ParseError(at + ".priority: needs a top-level 'principal' order");
        spec.priority = PriorityOrder(get_as<std::vector<int>>(a.at("priority"), at + ".priority"));
        auto m = footrule(*sc.principal, *spec.priority);
        theta.push_back({m.total});
        derived_max = std::max(derived_max, max_footrule(sc.principal->size()));
        any_theta = true;
        if (a.contains("realized")) {
          spec.realized = PriorityOrder(get_as<std::vector<int>>(a.at("realized"), at + ".realized"));
          (void)footrule(*sc.principal, *spec.realized);
        }
      } else if (a.contains("theta")) {
        const auto& t = a.at("theta");
        theta.push_back(t.is_array() ? get_as<std::vector<int>>(t, at + ".theta")
                                     : std::vector<int>{get_as<int>(t, at + ".theta")});
        any_theta = true;
      }
      sc.agents.push_back(std::move(spec));
    }
  }

  if (j.contains("types")) {
    const auto& t = j.at("types");
    const auto hat = get_as<std::vector<std::vector<int>>>(field(t, "hat", where + ".types"), where + ".types.hat");
    if (t.contains("tilde")) {
      const auto tilde = get_as<std::vector<std::vector<int>>>(t.at("tilde"), where + ".types.tilde");
      sc.types = TypeTable::markov(hat, tilde);
      detail::check_markov(*sc.types, where + ".types");
    } else {
      sc.types = TypeTable::fixed(hat);
    }
  } else if (any_theta) {
    if (theta.size() != sc.agents.size()) {
      throw ParseError(where + ".agents: every agent needs 'theta' or 'priority'");
    }
    sc.types = TypeTable::fixed(theta);
  }

  if (j.contains("generate")) {
    if (sc.types) throw ConfigError(where + ": give either explicit types or 'generate', not both");
    sc.generate = detail::parse_generate(j.at("generate"), where + ".generate");
    derived_max = sc.generate->mode == GenerateMode::permutation
                      ? max_footrule(sc.generate->tasks)
                      : sc.generate->theta_max;
  }

  if (sc.types) {
    if (sc.types->agents() < 2) {
      throw InsufficientAgentsError(where + ": insufficient agents (need at least 2, got " +
                                    std::to_string(sc.types->agents()) + ")");
    }
    check_stage_count(sc.config, sc.types->stages());
    if (!sc.agents.empty() && sc.agents.size() != sc.types->agents()) {
      throw DimensionError(where + ": 'agents' and 'types' disagree on the agent count");
    }
    derived_max = std::max(derived_max, sc.types->max_entry());
  } else if (sc.generate) {
    check_stage_count(sc.config, sc.generate->stages);
  }

  if (j.contains("verify")) {
    const auto& v = j.at("verify");
    const std::string at = where + ".verify";
    VerifySpec spec;
    spec.checks = get_as<std::vector<std::string>>(field(v, "checks", at), at + ".checks");
    for (const auto& c : spec.checks) {
      if (c != "ic" && c != "ir" && c != "so" && c != "gamma" && c != "payment") {
        throw ParseError(at + ".checks: unknown check '" + c + "'");
      }
    }
    if (v.contains("grid")) spec.grid = detail::parse_grid(v.at("grid"), at + ".grid");
    check_stage_count(sc.config, spec.grid.stages);
    spec.options.gamma_policy = tie_break;
    if (v.contains("gamma_policy")) {
      spec.options.gamma_policy = gamma_policy_from(get_as<std::string>(v.at("gamma_policy"), at + ".gamma_policy"));
    }
    if (v.contains("behavior")) {
      const auto b = get_as<std::string>(v.at("behavior"), at + ".behavior");
      if (b == "best_response") spec.options.best_response_reports = true;
      else if (b != "truthful") throw ParseError(at + ".behavior: expected truthful or best_response");
    }
    if (v.contains("grid_max")) spec.grid_max = get_as<int>(v.at("grid_max"), at + ".grid_max");
    if (v.contains("budget")) sc.verify_budget = get_as<std::uint64_t>(v.at("budget"), at + ".budget");
    sc.verify = std::move(spec);
  }

  if (!sc.types && !sc.generate && !sc.verify) {
    throw ConfigError(where + ": nothing to do (no agents, types, generate or verify block)");
  }
  sc.theta_max = j.contains("theta_max") ? get_as<int>(j.at("theta_max"), where + ".theta_max")
                                         : derived_max;
  if (sc.theta_max < 0) throw DomainError(where + ".theta_max must be non-negative");
  return sc;
}

/// Parses JSON text; syntax errors report line and column.
inline Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(name + ": " + e.what());
  }
  return parse_scenario(j, name);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

/// ORDERMECH_BUDGET, when set, replaces both enumeration budgets.
inline void apply_budget_override(Scenario& sc, const char* value) {
  if (!value || !*value) return;
  try {
    std::size_t used = 0;
    const auto b = std::stoull(value, &used);
    if (used != std::string(value).size()) throw std::invalid_argument("trailing text");
    sc.search_budget = b;
    sc.verify_budget = b;
  } catch (const std::exception&) {
    throw ConfigError("ORDERMECH_BUDGET must be a non-negative integer, got '" + std::string(value) + "'");
  }
}

}  // namespace ordermech
