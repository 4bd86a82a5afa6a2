// Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
// Usage: acceptance <path-to-ordermech-cli>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ordermech/ordermech.hpp"

using namespace ordermech;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

MechanismConfig config(MechanismKind kind, PaymentRule rule = PaymentRule::second_price_linear(),
                       ProfitFunction s = ProfitFunction::affine(10, 2)) {
  MechanismConfig cfg;
  cfg.kind = kind;
  cfg.rule = std::move(rule);
  cfg.profit = std::move(s);
  return cfg;
}

std::string summary(const VerificationReport& r) {
  return std::string(to_string(r.property)) + "=" + std::string(to_string(r.status)) + " (" +
         std::to_string(r.instances_checked) + " checked, " + std::to_string(r.violations) +
         " violations)";
}

bool replays(const MechanismConfig& cfg, const VerificationReport& r, const PaymentRule* rule = nullptr) {
  return std::all_of(r.witnesses.begin(), r.witnesses.end(),
                     [&](const Witness& w) { return replay(cfg, w, rule); });
}

// ---------------------------------------------------------------------------

Outcome indivisible_ic_ir() {
  Outcome o;
  auto cfg = config(MechanismKind::indivisible);
  for (std::size_t n : {2u, 3u}) {
    GridSpec grid{n, 1, 6, TypeSpace::fixed};
    auto ic = check_ic(cfg, grid);
    auto ir = check_ir(cfg, grid);
    o.require(ic.status == Status::pass, "I=" + std::to_string(n) + " " + summary(ic));
    o.require(ir.status == Status::pass, "I=" + std::to_string(n) + " " + summary(ir));
    o.note("I=" + std::to_string(n) + ": " + std::to_string(ic.instances_checked) + " IC contexts, " +
           std::to_string(ir.instances_checked) + " IR instances");
  }
  return o;
}

Outcome indivisible_so() {
  Outcome o;
  for (auto s : {ProfitFunction::affine(10, 2), ProfitFunction::affine(10, Money(1, 2))}) {
    auto cfg = config(MechanismKind::indivisible, PaymentRule::second_price_linear(), s);
    for (std::size_t n : {2u, 3u}) {
      auto so = check_so(cfg, GridSpec{n, 1, 6, TypeSpace::fixed});
      o.require(so.status == Status::pass, "b=" + s.slope.str() + " I=" + std::to_string(n) + " " + summary(so));
    }
  }
  // Closed form for b = 2: optimum is S(0) - min theta.
  std::size_t checked = 0;
  for (std::size_t n : {2u, 3u}) {
    GeneratorSpec g{GenerateMode::exhaustive, n, 1, 6, 0, TypeSpace::fixed, 0};
    for_each_instance(0, g, [&](const TypeTable& t) {
      int lowest = t.hat(0, 0);
      for (std::size_t i = 1; i < t.agents(); ++i) lowest = std::min(lowest, t.hat(i, 0));
      auto opt = social_optimum(t, CostFunction::linear(), ProfitFunction::affine(10, 2));
      ++checked;
      if (opt.welfare != Money(10 - lowest)) {
        o.require(false, "closed form broken");
        return false;
      }
      return true;
    });
  }
  o.note("closed form on " + std::to_string(checked) + " instances");
  return o;
}

Outcome gamma_indifference() {
  Outcome o;
  auto cfg = config(MechanismKind::indivisible);
  std::size_t points = 0;
  for (std::size_t n : {2u, 3u}) {
    GeneratorSpec g{GenerateMode::exhaustive, n, 1, 6, 0, TypeSpace::fixed, 0};
    for_each_instance(0, g, [&](const TypeTable& t) {
      auto reports = truthful_reports(t);
      auto path = allocate(cfg, reports);
      const auto& row = t.row(path.winners[0]);
      for (int gamma = 0; gamma <= row.hat[0]; ++gamma) {
        ++points;
        if (stage_utility(cfg, path, reports, row, 0, gamma) != Money(path.runner_up[0] - row.hat[0])) {
          o.require(false, "utility differs from theta_bar - theta_w");
          return false;
        }
      }
      return true;
    });
    auto r = check_gamma_independence(cfg, GridSpec{n, 1, 6, TypeSpace::fixed});
    o.require(r.status == Status::pass, summary(r));
  }
  o.note(std::to_string(points) + " (instance, gamma) points");
  return o;
}

Outcome negative_suite() {
  Outcome o;
  struct Case {
    std::string name;
    PaymentRule rule;
  };
  const std::vector<Case> cases{{"flat_report", PaymentRule::of(PaymentFamily::flat_report)},
                                {"realized_only", PaymentRule::realized_only(6, 1)},
                                {"claimed_cost", PaymentRule::of(PaymentFamily::claimed_cost)},
                                {"remark4_vcg", PaymentRule::remark4_vcg(7)},
                                {"scaled_linear", PaymentRule::scaled_linear(2)}};
  const GridSpec grid{2, 1, 6, TypeSpace::fixed};
  for (const auto& c : cases) {
    auto cfg = config(MechanismKind::indivisible, c.rule);
    auto ic = check_ic(cfg, grid);
    auto ir = check_ir(cfg, grid);
    auto so = check_so(cfg, grid);
    VerifyOptions strategic;
    strategic.best_response_reports = true;
    strategic.gamma_policy = GammaPolicy::max_gamma;
    auto so_strategic = check_so(cfg, grid, strategic);
    auto props = check_payment_properties(c.rule, cfg.cost, cfg.profit, 10);

    const std::size_t witnesses = ic.witnesses.size() + ir.witnesses.size() + so.witnesses.size() +
                                  so_strategic.witnesses.size();
    o.require(witnesses > 0, c.name + ": no IC/IR/SO witness");
    o.require(props.report.status == Status::fail, c.name + ": payment properties hold");
    o.require(replays(cfg, ic) && replays(cfg, ir) && replays(cfg, so) && replays(cfg, so_strategic),
              c.name + ": witness does not replay");
    o.require(replays(cfg, props.report, &c.rule), c.name + ": payment witness does not replay");
    o.note(c.name + " ic/ir/so/so_br violations " + std::to_string(ic.violations) + "/" +
           std::to_string(ir.violations) + "/" + std::to_string(so.violations) + "/" +
           std::to_string(so_strategic.violations) + (props.no_overpay ? "" : ", overpays") +
           (props.win_incentive_true ? "" : ", no win incentive"));
  }
  return o;
}

Outcome m1_fixed_types() {
  Outcome o;
  auto cfg = config(MechanismKind::m1);
  struct G {
    std::size_t n, k;
    int max;
  };
  for (auto g : {G{2, 1, 6}, G{3, 1, 6}, G{2, 2, 4}, G{3, 2, 4}, G{2, 3, 3}, G{3, 3, 2}}) {
    GridSpec grid{g.n, g.k, g.max, TypeSpace::fixed};
    const std::string tag = "I=" + std::to_string(g.n) + ",K=" + std::to_string(g.k);
    auto ic = check_ic(cfg, grid);
    auto ir = check_ir(cfg, grid);
    auto so = check_so(cfg, grid);
    o.require(ic.passed(), tag + " " + summary(ic));
    o.require(ir.passed(), tag + " " + summary(ir));
    o.require(so.passed(), tag + " " + summary(so));
  }

  // Stage permutation invariance on every K = 3 instance of the I = 2 grid.
  std::vector<int> order{0, 1, 2};
  std::size_t checked = 0;
  GeneratorSpec g{GenerateMode::exhaustive, 2, 3, 3, 0, TypeSpace::fixed, 0};
  for_each_instance(0, g, [&](const TypeTable& t) {
    auto base = run_m1(cfg, t, std::vector<AgentStrategy>(2), 3);
    std::vector<int> perm = order;
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<std::vector<int>> theta(2, std::vector<int>(3));
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t s = 0; s < 3; ++s) theta[i][s] = t.hat(i, perm[s]);
      auto moved = run_m1(cfg, TypeTable::fixed(theta), std::vector<AgentStrategy>(2), 3);
      for (std::size_t s = 0; s < 3; ++s) {
        const auto& a = base.stages[perm[s]];
        const auto& b = moved.stages[s];
        if (a.winner != b.winner || a.gamma != b.gamma || a.payments != b.payments ||
            a.utilities != b.utilities || a.principal != b.principal || a.welfare != b.welfare) {
          o.require(false, "stage permutation changed a settlement");
          return false;
        }
      }
      ++checked;
    }
    return true;
  });
  o.note("grids K=1 [0,6], K=2 [0,4], K=3 [0,3]/[0,2]; " + std::to_string(checked) +
         " permuted runs");
  return o;
}

Outcome dynamic_falsification() {
  Outcome o;
  auto truth = TypeTable::markov({{5, 6}, {4, 5}}, {{1}, {4}});
  auto cfg = config(MechanismKind::m1);
  std::vector<AgentRow> candidates;
  for_each_row(ReportSpace::contingent, 2, 6, [&](const AgentRow& r) { candidates.push_back(r); });
  auto w = scan_deviations(cfg, truthful_reports(truth), 0, truth.row(0), candidates);
  o.require(w.has_value(), "no witness");
  if (!w) return o;
  o.require(w->expected == Money(0), "truthful utility " + w->expected.str());
  o.require(w->observed == Money(3), "deviation utility " + w->observed.str());
  o.require(replay(cfg, *w), "witness does not replay");

  // Under-bidding stage 1 to 3 is one of the gain-3 deviations.
  auto under = truthful_reports(truth);
  under.set_row(0, AgentRow{{3, 6}, {3, 1}});
  const Money via3 = best_payoff(cfg, under, 0, truth.row(0)).utility;
  o.require(via3 == Money(3), "reporting 3 yields " + via3.str());

  // Stage-1 loss plus stage-2 gain: (4 - 5) + (5 - 1) = 3.
  const int bar11 = 4, theta11 = 5, bar12 = 5, tilde12 = 1;
  o.require(Money(bar11 - theta11 + bar12 - tilde12) == w->observed, "decomposition mismatch");
  o.note("witness report hat=(" + std::to_string(w->reports->hat(0, 0)) + "," +
         std::to_string(w->reports->hat(0, 1)) + ") tilde2=" + std::to_string(w->reports->tilde(0, 1)) +
         ", gain " + w->delta().str());
  return o;
}

Outcome m2_truthfulness() {
  Outcome o;
  auto cfg = config(MechanismKind::m2);
  GridSpec grid{2, 2, 4, TypeSpace::markov};
  auto ic = check_ic(cfg, grid);
  auto ir = check_ir(cfg, grid);
  auto so = check_so(cfg, grid);
  o.require(ic.passed(), summary(ic));
  o.require(ir.passed(), summary(ir));
  o.require(so.passed(), summary(so));
  o.require(replays(cfg, ic), "IC witness does not replay");
  if (!ic.witnesses.empty()) {
    const auto& w = ic.witnesses.front();
    o.note("first witness: agent " + std::to_string(w.agent + 1) + " truthful " + w.expected.str() +
           " deviation " + w.observed.str());
  }
  if (ic.passed()) o.note(summary(ic) + ", " + summary(ir) + ", " + summary(so));

  // Weaker reading: the other agent reports truthfully.
  std::vector<AgentRow> rows;
  for_each_row(ReportSpace::markov, 2, 4, [&](const AgentRow& r) { rows.push_back(r); });
  std::size_t instances = 0;
  std::size_t profitable = 0;
  GeneratorSpec g{GenerateMode::exhaustive, 2, 2, 4, 0, TypeSpace::markov, 0};
  for_each_instance(0, g, [&](const TypeTable& t) {
    ++instances;
    const auto reports = truthful_reports(t);
    for (std::size_t i = 0; i < 2; ++i) {
      if (scan_deviations(cfg, reports, i, t.row(i), rows)) {
        ++profitable;
        break;
      }
    }
    return true;
  });
  o.note("against truthful opponents " + std::to_string(profitable) + "/" +
         std::to_string(instances) + " instances admit a profitable deviation");
  return o;
}

Outcome m2_literal_vs_corrected() {
  Outcome o;
  GridSpec grid{2, 2, 4, TypeSpace::markov};
  auto literal = config(MechanismKind::m2);
  literal.m2_payment = M2Payment::literal;
  auto a = check_gamma_independence(literal, grid);
  auto b = check_gamma_independence(config(MechanismKind::m2), grid);
  o.require(a.status == Status::fail, "literal mode: " + summary(a));
  o.require(b.status == Status::pass, "corrected mode: " + summary(b));
  o.require(replays(literal, a), "literal witness does not replay");
  o.note("literal " + std::to_string(a.violations) + " gamma-dependent stages, corrected " +
         std::to_string(b.violations));
  return o;
}

Outcome dp_consistency() {
  Outcome o;
  std::size_t grid_checked = 0;
  GeneratorSpec g{GenerateMode::exhaustive, 2, 2, 4, 0, TypeSpace::markov, 0};
  for_each_instance(0, g, [&](const TypeTable& t) {
    auto reports = truthful_reports(t);
    ++grid_checked;
    if (!dp_conditions_hold(reports, allocate_m2(reports))) {
      o.require(false, "pairwise condition broken");
      return false;
    }
    return true;
  });

  std::size_t sampled = 0;
  for (std::size_t n : {2u, 3u}) {
    for (std::size_t k : {2u, 3u}) {
      GeneratorSpec s{GenerateMode::sample, n, k, 6, 1000, TypeSpace::markov, 0};
      for_each_instance(1000 + 10 * n + k, s, [&](const TypeTable& t) {
        auto reports = truthful_reports(t);
        auto path = allocate_m2(reports);
        auto paths = enumerate_paths(t);
        auto best = std::min_element(paths.begin(), paths.end(),
                                     [](const auto& x, const auto& y) { return x.second < y.second; });
        ++sampled;
        if (path.winners != best->first || path.total != best->second ||
            !dp_conditions_hold(reports, path)) {
          o.require(false, "DP differs from enumeration");
          return false;
        }
        return true;
      });
    }
  }
  o.note(std::to_string(grid_checked) + " grid instances, " + std::to_string(sampled) + " samples");
  return o;
}

Outcome rank_metric() {
  Outcome o;
  std::size_t pairs = 0;
  for (std::size_t k = 1; k <= 5; ++k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 1);
    std::vector<PriorityOrder> orders;
    do {
      orders.emplace_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const auto n = orders.size();
    std::vector<int> d(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) d[a * n + b] = footrule(orders[a], orders[b]).total;
    bool ok = true;
    int largest = 0;
    for (std::size_t a = 0; a < n && ok; ++a) {
      for (std::size_t b = 0; b < n && ok; ++b) {
        const int ab = d[a * n + b];
        largest = std::max(largest, ab);
        ok = ab == d[b * n + a] && ab % 2 == 0 && ab >= 0 && ab <= max_footrule(k);
        for (std::size_t c = 0; c < n && ok; ++c) ok = d[a * n + c] <= ab + d[b * n + c];
        ++pairs;
      }
    }
    o.require(ok, "metric property broken at K=" + std::to_string(k));
    o.require(largest == max_footrule(k), "bound not attained at K=" + std::to_string(k));
  }
  o.note(std::to_string(pairs) + " pairs");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "CLI path not given");
    return o;
  }
  const fs::path root = fs::temp_directory_path() / "ordermech_acceptance";
  fs::remove_all(root);
  std::size_t files = 0;
  std::vector<fs::path> fixtures;
  for (const auto& e : fs::directory_iterator(ORDERMECH_SCENARIOS)) fixtures.push_back(e.path());
  std::sort(fixtures.begin(), fixtures.end());
  for (const auto& f : fixtures) {
    for (const char* pass : {"a", "b"}) {
      const std::string cmd = "\"" + cli + "\" run \"" + f.string() + "\" --out \"" +
                              (root / pass).string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc == -1) o.require(false, "cannot launch CLI");
    }
    for (const char* ext : {".csv", ".json"}) {
      const auto name = f.stem().string() + ext;
      const auto a = root / "a" / name;
      const auto b = root / "b" / name;
      o.require(fs::exists(a) && fs::exists(b), "missing output " + name);
      o.require(slurp(a) == slurp(b), "outputs differ: " + name);
      ++files;
    }
  }
  fs::remove_all(root);
  o.note(std::to_string(fixtures.size()) + " fixtures, " + std::to_string(files) + " file pairs identical");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "indivisible mechanism: IC and IR on I in {2,3}, theta in [0,6]", indivisible_ic_ir},
      {2, "indivisible mechanism: welfare equals oracle, b in {2, 1/2}", indivisible_so},
      {3, "gamma indifference of the truthful winner", gamma_indifference},
      {4, "negative payment suite yields witnesses", negative_suite},
      {5, "repeated mechanism on fixed types: IC, IR, SO, stage permutation", m1_fixed_types},
      {6, "repeated mechanism on dynamic types: deviation gain 3", dynamic_falsification},
      {7, "lookahead mechanism: IC, IR, SO on I=2, K=2, [0,4]", m2_truthfulness},
      {8, "lookahead payment: literal depends on gamma, corrected does not", m2_literal_vs_corrected},
      {9, "lookahead allocation: pairwise conditions and enumeration", dp_consistency},
      {10, "footrule metric suite, K <= 5", rank_metric},
      {11, "CLI run is byte-deterministic on every fixture", [&] { return determinism(cli); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << timing
              << ") " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
