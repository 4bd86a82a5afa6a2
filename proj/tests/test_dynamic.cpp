#include <gtest/gtest.h>

#include <vector>

#include "ordermech/generator.hpp"
#include "ordermech/oracle.hpp"
#include "ordermech/run.hpp"

using namespace ordermech;

namespace {

MechanismConfig config(MechanismKind kind, M2Payment mode = M2Payment::corrected) {
  MechanismConfig cfg;
  cfg.kind = kind;
  cfg.profit = ProfitFunction::affine(10, 2);
  cfg.m2_payment = mode;
  return cfg;
}

std::vector<AgentStrategy> truthful(std::size_t n) {
  return std::vector<AgentStrategy>(n, AgentStrategy{});
}

// Lookahead overturns the myopic choice on this instance.
TypeTable lookahead_instance() { return TypeTable::markov({{5, 6}, {4, 5}}, {{1}, {4}}); }

}  // namespace

TEST(M1, TwoIndependentSecondPriceStages) {
  // Stage 1 bids (3, 5), stage 2 bids (4, 2).
  auto truth = TypeTable::fixed({{3, 4}, {5, 2}});
  auto r = run_m1(config(MechanismKind::m1), truth, truthful(2), 6);
  EXPECT_EQ(r.path.winners, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.stages[0].utilities[0], Money(2));
  EXPECT_EQ(r.stages[1].utilities[1], Money(2));
  EXPECT_EQ(r.stages[0].theta_bar, 5);
  EXPECT_EQ(r.stages[1].theta_bar, 4);
}

TEST(M1, SingleStageIsIndivisible) {
  auto truth = TypeTable::fixed({{3}, {5}});
  auto a = run_m1(config(MechanismKind::m1), truth, truthful(2), 6);
  auto b = run_indivisible(config(MechanismKind::indivisible), {3, 5}, truthful(2), 6);
  EXPECT_EQ(a.stages[0].utilities, b.stages[0].utilities);
  EXPECT_EQ(a.stages[0].welfare, b.stages[0].welfare);
}

TEST(M1, StagePermutationPermutesSettlements) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3;
    const std::size_t k = 3;
    std::vector<std::vector<int>> theta(n, std::vector<int>(k));
    for (auto& row : theta)
      for (auto& v : row) v = rng.uniform(0, 6);
    const auto order = rng.permutation(k);
    std::vector<std::vector<int>> permuted(n, std::vector<int>(k));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s = 0; s < k; ++s) permuted[i][s] = theta[i][order[s] - 1];
    auto a = run_m1(config(MechanismKind::m1), TypeTable::fixed(theta), truthful(n), 6);
    auto b = run_m1(config(MechanismKind::m1), TypeTable::fixed(permuted), truthful(n), 6);
    for (std::size_t s = 0; s < k; ++s) {
      const auto& x = a.stages[order[s] - 1];
      const auto& y = b.stages[s];
      ASSERT_EQ(x.winner, y.winner);
      ASSERT_EQ(x.gamma, y.gamma);
      ASSERT_EQ(x.utilities, y.utilities);
      ASSERT_EQ(x.principal, y.principal);
      ASSERT_EQ(x.welfare, y.welfare);
    }
  }
}

TEST(AllocateM2, PathTotals) {
  auto reports = ReportTable::markov({{2, 4}, {3, 2}}, {{1}, {1}});
  auto paths = enumerate_paths(TypeTable(reports.rows()));
  ASSERT_EQ(paths.size(), 4u);
  EXPECT_EQ(paths[0].second, 3);
  EXPECT_EQ(paths[1].second, 4);
  EXPECT_EQ(paths[2].second, 7);
  EXPECT_EQ(paths[3].second, 4);
  auto path = allocate_m2(reports);
  EXPECT_EQ(path.winners, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(path.total, 3);
}

TEST(AllocateM2, LookaheadOverturnsMyopicChoice) {
  auto reports = truthful_reports(lookahead_instance());
  auto path = allocate_m2(reports);
  EXPECT_EQ(path.winners, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(path.total, 6);
  EXPECT_EQ(allocate_m1(reports).winners, (std::vector<std::size_t>{1, 1}));
}

TEST(AllocateM2, SingleStageIsArgmin) {
  auto path = allocate_m2(ReportTable::fixed({{4}, {2}, {2}}));
  EXPECT_EQ(path.winners, (std::vector<std::size_t>{1}));
  EXPECT_EQ(path.runner_up[0], 2);
}

TEST(AllocateM2, Errors) {
  EXPECT_THROW(allocate_m2(ReportTable::markov({{2, 4}, {3, 2}}, {{4}, {1}})), InvalidReportError);
  EXPECT_THROW(allocate_m2(ReportTable::fixed({{2, 4}})), InsufficientAgentsError);
}

TEST(AllocateM2, TieGoesToSmallestSequence) {
  // Every path totals 2.
  auto path = allocate_m2(ReportTable::markov({{1, 2}, {1, 2}}, {{1}, {1}}));
  EXPECT_EQ(path.winners, (std::vector<std::size_t>{0, 0}));
}

TEST(AllocateM2, MatchesEnumerationOnSamples) {
  for (std::size_t n : {2u, 3u}) {
    for (std::size_t k : {2u, 3u}) {
      GeneratorSpec g{GenerateMode::sample, n, k, 5, 300, TypeSpace::markov, 4};
      for (const auto& t : generate_instances(17 * n + k, g)) {
        auto path = allocate_m2(truthful_reports(t));
        auto paths = enumerate_paths(t);
        const auto best = std::min_element(paths.begin(), paths.end(), [](auto& a, auto& b) {
          return a.second < b.second;
        });
        ASSERT_EQ(path.total, best->second);
        ASSERT_EQ(path.winners, best->first);
      }
    }
  }
}

TEST(SettleM2, HandEvaluatedLookaheadInstance) {
  auto truth = lookahead_instance();
  auto reports = truthful_reports(truth);
  auto path = allocate_m2(reports);
  auto s = settle_m2(path, reports, truth, {0, 0}, CostFunction::linear(),
                     ProfitFunction::affine(10, 2));
  EXPECT_EQ(s[0].payment(), Money(9));
  EXPECT_EQ(s[0].utilities[0], Money(4));
  EXPECT_EQ(s[1].payment(), Money(5));
  EXPECT_EQ(s[1].utilities[0], Money(4));
  EXPECT_EQ(s[0].utilities[0] + s[1].utilities[0], Money(8));
}

TEST(SettleM2, WinnerNotContinuingGetsSecondPrice) {
  auto truth = TypeTable::markov({{1, 5}, {3, 2}}, {{4}, {1}});
  auto reports = truthful_reports(truth);
  auto path = allocate_m2(reports);
  ASSERT_EQ(path.winners, (std::vector<std::size_t>{0, 1}));
  for (int g = 0; g <= 1; ++g) {
    auto s = settle_m2(path, reports, truth, {g, 0}, CostFunction::linear(),
                       ProfitFunction::affine(10, 2));
    EXPECT_EQ(s[0].payment(), Money(3 - g));
    EXPECT_EQ(s[0].utilities[0], Money(2));
    EXPECT_EQ(s[1].theta_bar, 4);
    EXPECT_EQ(s[1].utilities[1], Money(2));
  }
}

TEST(SettleM2, CorrectedUtilityIsConstantInGamma) {
  auto truth = lookahead_instance();
  auto reports = truthful_reports(truth);
  auto cfg = config(MechanismKind::m2);
  auto path = allocate(cfg, reports);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& row = truth.row(path.winners[k]);
    const Money base = stage_utility(cfg, path, reports, row, k, 0);
    for (int g = 1; g <= gamma_cap(path, row, k); ++g) {
      EXPECT_EQ(stage_utility(cfg, path, reports, row, k, g), base);
    }
  }
}

TEST(SettleM2, LiteralUtilityGrowsWithGamma) {
  auto truth = lookahead_instance();
  auto reports = truthful_reports(truth);
  auto cfg = config(MechanismKind::m2, M2Payment::literal);
  auto path = allocate(cfg, reports);
  const auto& row = truth.row(0);
  EXPECT_EQ(stage_utility(cfg, path, reports, row, 0, 0), Money(4));
  EXPECT_EQ(stage_utility(cfg, path, reports, row, 0, 5), Money(9));
}

TEST(SettleM2, NonlinearCostUnsupported) {
  auto truth = lookahead_instance();
  auto reports = truthful_reports(truth);
  auto path = allocate_m2(reports);
  EXPECT_THROW(settle_m2(path, reports, truth, {0, 0}, CostFunction::convex_quadratic(1),
                         ProfitFunction::affine(10, 2)),
               UnsupportedError);
}

TEST(RunM2, TruthfulLookaheadInstance) {
  auto r = run_m2(config(MechanismKind::m2), lookahead_instance(), truthful(2), 6);
  EXPECT_EQ(total_utility(r.stages, 0), Money(8));
  EXPECT_EQ(total_welfare(r.stages), Money(14));
}

// Agent 1 under-reports the continuation misalignment: the allocation is
// unchanged and the lookahead bonus grows by one. Best response therefore
// differs from the truth on this instance.
TEST(RunM2, BestResponseIsNotTruthful) {
  std::vector<AgentStrategy> s{{StrategyKind::best_response, {}, GammaPolicy::social},
                               {StrategyKind::truthful, {}, GammaPolicy::social}};
  auto br = run_m2(config(MechanismKind::m2), lookahead_instance(), s, 6);
  auto honest = run_m2(config(MechanismKind::m2), lookahead_instance(), truthful(2), 6);
  EXPECT_NE(br.reports.row(0), honest.reports.row(0));
  EXPECT_GT(total_utility(br.stages, 0), total_utility(honest.stages, 0));

  auto deviation = truthful_reports(lookahead_instance());
  deviation.set_row(0, AgentRow{{5, 6}, {5, 0}});
  EXPECT_EQ(best_payoff(config(MechanismKind::m2), deviation, 0, lookahead_instance().row(0)).utility,
            Money(9));
}

TEST(RunM2, RejectsNonMarkovTypes) {
  auto bad = TypeTable::markov({{5, 6}, {4, 5}}, {{6}, {4}});
  EXPECT_THROW(run_m2(config(MechanismKind::m2), bad, truthful(2), 6), ValidationError);
}

TEST(RunM1, DynamicTypesInviteEarlyUnderbid) {
  auto truth = lookahead_instance();
  auto cfg = config(MechanismKind::m1);
  auto truthful_reports_table = truthful_reports(truth);
  EXPECT_EQ(best_payoff(cfg, truthful_reports_table, 0, truth.row(0)).utility, Money(0));
  auto deviation = truthful_reports_table;
  deviation.set_row(0, AgentRow{{3, 6}, {3, 1}});
  EXPECT_EQ(best_payoff(cfg, deviation, 0, truth.row(0)).utility, Money(3));
}
