#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordermech/money.hpp"
#include "ordermech/static_mechanism.hpp"
#include "ordermech/tables.hpp"
#include "ordermech/verifier.hpp"

namespace ordermech {

using nlohmann::json;

inline json to_json_value(const Money& m) { return m.str(); }

template <class Tag>
json to_json_value(const MarkovTable<Tag>& t) {
  json hat = json::array();
  json tilde = json::array();
  for (const auto& r : t.rows()) {
    hat.push_back(r.hat);
    tilde.push_back(std::vector<int>(r.tilde.begin() + 1, r.tilde.end()));
  }
  return {{"hat", hat}, {"tilde", tilde}};
}

inline json ids_json(const std::vector<std::size_t>& ids) {
  json out = json::array();
  for (auto id : ids) out.push_back(id + 1);
  return out;
}

inline json to_json_value(const Settlement& s) {
  json pay = json::array();
  json util = json::array();
  for (const auto& p : s.payments) pay.push_back(p.str());
  for (const auto& u : s.utilities) util.push_back(u.str());
  return {{"stage", s.stage + 1},
          {"winner", s.winner + 1},
          {"theta_true", s.theta_true},
          {"theta_reported", s.theta_reported},
          {"theta_bar", s.theta_bar},
          {"gamma", s.gamma},
          {"payments", pay},
          {"utilities", util},
          {"V", s.principal.str()},
          {"Pi", s.welfare.str()},
          {"gated", s.gated}};
}

/// Agent and stage indices are emitted 1-based.
inline json to_json_value(const Witness& w) {
  json j = {{"kind", w.kind},
            {"expected", w.expected.str()},
            {"observed", w.observed.str()},
            {"delta", w.delta().str()}};
  if (w.truth || w.reports) {
    j["mechanism"] = to_string(w.mechanism);
    j["agent"] = w.agent + 1;
    j["stage"] = w.stage + 1;
    j["gammas"] = w.gammas;
  }
  if (w.truth) j["types"] = to_json_value(*w.truth);
  if (w.reports) j["reports"] = to_json_value(*w.reports);
  if (!w.detail.empty()) j["detail"] = w.detail;
  return j;
}

inline json to_json_value(const VerificationReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json_value(w));
  json j = {{"property", to_string(r.property)},
            {"status", to_string(r.status)},
            {"instances_checked", r.instances_checked},
            {"violations", r.violations},
            {"witnesses", witnesses}};
  if (!r.label.empty()) j["label"] = r.label;
  return j;
}

inline json to_json_value(const PaymentPropertyReport& p) {
  json j = to_json_value(p.report);
  j["no_overpay"] = p.no_overpay;
  j["win_incentive_true_type"] = p.win_incentive_true;
  j["win_incentive_any_report"] = p.win_incentive_any_report;
  return j;
}

}  // namespace ordermech
