#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ordermech/error.hpp"
#include "ordermech/money.hpp"

namespace ordermech {

// ---------------------------------------------------------------------------
// Cost of modifying a priority, h(theta, gamma).
// ---------------------------------------------------------------------------

enum class CostFamily { linear, affine_scaled, convex_quadratic };

struct CostFunction {
  CostFamily family = CostFamily::linear;
  Money scale{1};  // c in c*(theta-gamma) and c*(theta-gamma)^2

  static CostFunction linear() { return {}; }
  static CostFunction affine_scaled(Money c) { return {CostFamily::affine_scaled, std::move(c)}; }
  static CostFunction convex_quadratic(Money c) {
    return {CostFamily::convex_quadratic, std::move(c)};
  }

  /// h(theta, gamma) = theta - gamma exactly.
  [[nodiscard]] bool is_linear() const {
    return family == CostFamily::linear || (family == CostFamily::affine_scaled && scale == 1);
  }
};

inline void validate(const CostFunction& f) {
  if (f.family != CostFamily::linear && f.scale.sign() <= 0) {
    throw ConfigError("cost scale must be positive");
  }
}

/// Family formula without domain checks. Used where a payment rule evaluates
/// the cost family at an argument pair outside the agent's feasible region.
inline Money cost_formula(const CostFunction& f, int theta, int gamma) {
  Money gap = theta - gamma;
  switch (f.family) {
    case CostFamily::linear:
      return gap;
    case CostFamily::affine_scaled:
      return f.scale * gap;
    case CostFamily::convex_quadratic:
      return f.scale * gap * gap;
  }
  return gap;
}

inline Money cost(const CostFunction& f, int theta, int gamma) {
  if (theta < 0 || gamma < 0) throw DomainError("cost: misalignments must be non-negative");
  if (gamma > theta) {
    throw DomainError("cost: realized misalignment " + std::to_string(gamma) +
                      " exceeds initial misalignment " + std::to_string(theta));
  }
  return cost_formula(f, theta, gamma);
}

// ---------------------------------------------------------------------------
// Principal profit S(gamma).
// ---------------------------------------------------------------------------

enum class ProfitFamily { affine, table };

struct ProfitFunction {
  ProfitFamily family = ProfitFamily::affine;
  Money intercept{0};
  Money slope{1};
  std::vector<Money> values;  // table family: values[gamma], last entry repeats

  static ProfitFunction affine(Money a, Money b) {
    return {ProfitFamily::affine, std::move(a), std::move(b), {}};
  }
  static ProfitFunction table(std::vector<Money> values) {
    return {ProfitFamily::table, 0, 0, std::move(values)};
  }
};

inline void validate(const ProfitFunction& s) {
  if (s.family == ProfitFamily::affine) {
    if (s.slope.sign() <= 0) throw ConfigError("affine profit slope b must be positive");
    return;
  }
  if (s.values.empty()) throw ConfigError("profit table is empty");
  for (std::size_t g = 1; g < s.values.size(); ++g) {
    if (s.values[g] > s.values[g - 1]) throw ConfigError("profit table must be non-increasing");
  }
}

inline Money profit(const ProfitFunction& s, int gamma) {
  if (gamma < 0) throw DomainError("profit: realized misalignment must be non-negative");
  if (s.family == ProfitFamily::affine) return s.intercept - s.slope * Money(gamma);
  if (s.values.empty()) throw ConfigError("profit table is empty");
  auto idx = std::min<std::size_t>(static_cast<std::size_t>(gamma), s.values.size() - 1);
  return s.values[idx];
}

// ---------------------------------------------------------------------------
// Payment rules.
// ---------------------------------------------------------------------------

enum class PaymentFamily {
  second_price_linear,  // theta_bar - gamma
  flat_report,          // theta'
  realized_only,        // base - slope * gamma
  claimed_cost,         // h(theta', gamma)
  remark4_vcg,          // S(gamma) - Pi*
  scaled_linear,        // c * (theta_bar - gamma)
  runner_up_cost,       // h(theta_bar, gamma)
  custom_table,         // table[theta_bar][gamma]
};

enum class GatingMode { forfeit, penalty };

struct PaymentRule {
  PaymentFamily family = PaymentFamily::second_price_linear;
  Money scale{1};
  Money base{0};
  Money slope{1};
  std::optional<Money> optimal_welfare;
  std::vector<std::vector<Money>> table;
  bool gating = true;
  GatingMode gating_mode = GatingMode::forfeit;
  Money penalty{0};

  static PaymentRule second_price_linear() { return {}; }
  static PaymentRule of(PaymentFamily family) {
    PaymentRule r;
    r.family = family;
    return r;
  }
  static PaymentRule scaled_linear(Money c) {
    auto r = of(PaymentFamily::scaled_linear);
    r.scale = std::move(c);
    return r;
  }
  static PaymentRule realized_only(Money base, Money slope) {
    auto r = of(PaymentFamily::realized_only);
    r.base = std::move(base);
    r.slope = std::move(slope);
    return r;
  }
  static PaymentRule remark4_vcg(Money optimal_welfare) {
    auto r = of(PaymentFamily::remark4_vcg);
    r.optimal_welfare = std::move(optimal_welfare);
    return r;
  }
};

struct PaymentInputs {
  int theta_bar = 0;
  int theta_reported = 0;
  int gamma = 0;
};

struct PaymentOutcome {
  Money amount;
  bool gated = false;  // realized misalignment exceeded the report
};

/// Evaluates a payment rule. With gating on, a realized misalignment above
/// the report forfeits the payment (or charges the configured penalty).
inline PaymentOutcome pay(const PaymentRule& rule, const PaymentInputs& in,
                          const CostFunction& cost_fn, const ProfitFunction& profit_fn) {
  if (in.theta_bar < 0 || in.theta_reported < 0 || in.gamma < 0) {
    throw DomainError("pay: arguments must be non-negative");
  }
  if (rule.family == PaymentFamily::remark4_vcg && !rule.optimal_welfare) {
    throw ConfigError("remark4_vcg payment requires a precomputed optimal welfare");
  }
  if (rule.gating && in.gamma > in.theta_reported) {
    return {rule.gating_mode == GatingMode::penalty ? -rule.penalty : Money(0), true};
  }

  switch (rule.family) {
    case PaymentFamily::second_price_linear:
      return {Money(in.theta_bar - in.gamma)};
    case PaymentFamily::flat_report:
      return {Money(in.theta_reported)};
    case PaymentFamily::realized_only:
      return {rule.base - rule.slope * Money(in.gamma)};
    case PaymentFamily::claimed_cost:
      return {cost(cost_fn, in.theta_reported, in.gamma)};
    case PaymentFamily::remark4_vcg:
      return {profit(profit_fn, in.gamma) - *rule.optimal_welfare};
    case PaymentFamily::scaled_linear:
      return {rule.scale * Money(in.theta_bar - in.gamma)};
    case PaymentFamily::runner_up_cost:
      return {cost_formula(cost_fn, in.theta_bar, in.gamma)};
    case PaymentFamily::custom_table: {
      auto row = static_cast<std::size_t>(in.theta_bar);
      auto col = static_cast<std::size_t>(in.gamma);
      if (row >= rule.table.size() || col >= rule.table[row].size()) {
        throw DomainError("custom payment table has no entry for theta_bar=" +
                          std::to_string(in.theta_bar) + ", gamma=" + std::to_string(in.gamma));
      }
      return {rule.table[row][col]};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Names used in scenario files.
// ---------------------------------------------------------------------------

inline std::string_view to_string(CostFamily f) {
  switch (f) {
    case CostFamily::linear: return "linear";
    case CostFamily::affine_scaled: return "affine_scaled";
    case CostFamily::convex_quadratic: return "convex_quadratic";
  }
  return "?";
}

inline std::string_view to_string(ProfitFamily f) {
  return f == ProfitFamily::affine ? "affine" : "table";
}

inline std::string_view to_string(PaymentFamily f) {
  switch (f) {
    case PaymentFamily::second_price_linear: return "second_price_linear";
    case PaymentFamily::flat_report: return "flat_report";
    case PaymentFamily::realized_only: return "realized_only";
    case PaymentFamily::claimed_cost: return "claimed_cost";
    case PaymentFamily::remark4_vcg: return "remark4_vcg";
    case PaymentFamily::scaled_linear: return "scaled_linear";
    case PaymentFamily::runner_up_cost: return "runner_up_cost";
    case PaymentFamily::custom_table: return "custom_table";
  }
  return "?";
}

inline CostFamily cost_family_from(std::string_view name) {
  for (auto f : {CostFamily::linear, CostFamily::affine_scaled, CostFamily::convex_quadratic}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown cost family '" + std::string(name) + "'");
}

inline ProfitFamily profit_family_from(std::string_view name) {
  if (name == "affine") return ProfitFamily::affine;
  if (name == "table") return ProfitFamily::table;
  throw ConfigError("unknown profit family '" + std::string(name) + "'");
}

inline PaymentFamily payment_family_from(std::string_view name) {
  for (auto f : {PaymentFamily::second_price_linear, PaymentFamily::flat_report,
                 PaymentFamily::realized_only, PaymentFamily::claimed_cost,
                 PaymentFamily::remark4_vcg, PaymentFamily::scaled_linear,
                 PaymentFamily::runner_up_cost, PaymentFamily::custom_table}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown payment family '" + std::string(name) + "'");
}

}  // namespace ordermech
