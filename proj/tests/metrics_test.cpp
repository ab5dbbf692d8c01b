#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "liftdd/errors.hpp"
#include "liftdd/metrics.hpp"
#include "support.hpp"

namespace liftdd {
namespace {

using testing::building;
using testing::fault;
using testing::wt_oracle;

// Direct count over all pairs.
double a12_by_pairs(const std::vector<double>& a, const std::vector<double>& b) {
  double wins = 0;
  for (double x : a) {
    for (double y : b) wins += x < y ? 1.0 : x == y ? 0.5 : 0.0;
  }
  return wins / static_cast<double>(a.size() * b.size());
}

TEST(A12, Examples) {
  EXPECT_EQ(a12({1, 2, 3}, {1, 2, 3}), 0.5);
  EXPECT_EQ(a12({1, 2, 3}, {4, 5, 6}), 1.0);
  EXPECT_EQ(a12({4, 5, 6}, {1, 2, 3}), 0.0);
  EXPECT_EQ(a12({2}, {2}), 0.5);
  EXPECT_EQ(a12({1, 3}, {2}), 0.5);
  EXPECT_EQ(a12({1, 1, 5}, {1, 4}), 0.5);
  EXPECT_EQ(a12({1, 1, 3}, {1, 4}), 4.0 / 6.0);
  EXPECT_THROW(a12({}, {1}), ValidationError);
  EXPECT_THROW(a12({1}, {}), ValidationError);
}

TEST(A12, MatchesPairwiseCountAndIsAntisymmetric) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(1, 25);
  std::uniform_int_distribution<int> value(0, 9);  // small range forces ties
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(size(rng)));
    std::vector<double> b(static_cast<std::size_t>(size(rng)));
    for (auto& x : a) x = value(rng) * 0.25;
    for (auto& x : b) x = value(rng) * 0.25;
    EXPECT_NEAR(a12(a, b), a12_by_pairs(a, b), 1e-12);
    EXPECT_NEAR(a12(a, b) + a12(b, a), 1.0, 1e-12);
  }
}

TEST(Summarize, MedianMeanAndSampleDeviation) {
  const SampleStats s = summarize({4, 1, 3, 2});
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  const SampleStats one = summarize({7});
  EXPECT_DOUBLE_EQ(one.median, 7);
  EXPECT_DOUBLE_EQ(one.stddev, 0);
  EXPECT_DOUBLE_EQ(summarize({5, 1, 3}).median, 3);
  EXPECT_THROW(summarize({}), ValidationError);
}

TEST(Tirr, Ratio) {
  // Original fails 10000 s after its start, the reduced input 900 s after its own.
  EXPECT_NEAR(tirr_ratio(10000, 900), 0.91, 1e-12);
  EXPECT_EQ(tirr_ratio(250, 250), 0.0);
  EXPECT_THROW(tirr_ratio(0, 10), ValidationError);
}

class TirrOnSimulator : public ::testing::Test {
 protected:
  void SetUp() override {
    FaultConfig f = fault(FaultKind::dead_car, 0);
    f.reassign_after = 200;
    ctx_ = at_threshold(make_context(testing::running_example(), building(10, 3), f, wt_oracle(200)), 5);
  }
  ReductionContext ctx_;
};

TEST_F(TirrOnSimulator, IdentityIsZero) {
  const TirrReport t = tirr_ft(ctx_, ctx_.original);
  EXPECT_EQ(t.tirr_ft, 0.0);
  EXPECT_DOUBLE_EQ(t.tet_fail_original, 12147.0 - 11945.0);
  EXPECT_EQ(t.tet_fail_original, t.tet_fail_reduced);
}

TEST_F(TirrOnSimulator, ReducedInputsMeasuredFromTheirOwnStart) {
  for (Algorithm a : all_algorithms()) {
    const ReductionResult r = reduce(ctx_, a);
    const TirrReport t = tirr_ft(ctx_, r.final, r.checkpoint);
    const SimOutcome full = replay(ctx_, r.final, r.checkpoint, false);
    const Verdict v = judge(full, ctx_.oracle);
    EXPECT_DOUBLE_EQ(t.tet_fail_reduced, *v.failing_time - full.sim_start) << to_string(a);
    EXPECT_DOUBLE_EQ(t.tet_fail_original, 202.0);
    EXPECT_NEAR(t.tirr_ft, 1.0 - t.tet_fail_reduced / 202.0, 1e-12);
    EXPECT_LT(t.tirr_ft, 1.0);
  }
}

// A reduced input may trip a different, slower-developing violation than the
// original, so the ratio can be negative.
TEST_F(TirrOnSimulator, DifferentFailureCanTakeLonger) {
  const TestInput late = ctx_.original.filter([](const Passenger& p) { return p.id >= 4 && p.id <= 6; });
  const TirrReport t = tirr_ft(ctx_, late);
  EXPECT_GT(t.tet_fail_reduced, t.tet_fail_original);
  EXPECT_LT(t.tirr_ft, 0.0);
}

TEST_F(TirrOnSimulator, PassingReducedInputIsAnError) {
  // A working car already waits at the call floor.
  const Checkpoint cp{11990, {10, 2, 10}};
  EXPECT_THROW(tirr_ft(ctx_, TestInput({testing::pax(1, 12000, 2, 3)}), cp), ValidationError);
}

TEST_F(TirrOnSimulator, ComparisonTableShape) {
  const std::vector<NamedScenario> scenarios = {{"running", ctx_}};
  const ComparisonTable t = run_comparison(scenarios, {Algorithm::backward, Algorithm::dd_event},
                                           {5, 20}, 3);
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.wall_samples.size(), 3u);
    EXPECT_EQ(row.test, "running");
    EXPECT_GE(row.passengers, 1u);
    EXPECT_LE(row.wall.stddev, row.wall.mean * 3 + 1e-9);
    if (row.algorithm == Algorithm::backward) EXPECT_EQ(row.a12_vs_baseline, 0.5);
  }
  EXPECT_EQ(t.rows[0].threshold, 5);
  EXPECT_EQ(t.rows[2].threshold, 20);
  std::ostringstream csv;
  t.write_csv(csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kComparisonCsvHeader);
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(n, 4);
  EXPECT_EQ(t.to_json().at("rows").size(), 4u);
  EXPECT_THROW(run_comparison({}, {Algorithm::backward}, {5}, 1), ConfigError);
  EXPECT_THROW(run_comparison(scenarios, {Algorithm::backward}, {5}, 0), ConfigError);
}

TEST(Thresholds, DefaultLevels) {
  const auto& levels = default_thresholds();
  ASSERT_EQ(levels.size(), 10u);
  EXPECT_EQ(levels.front(), 5);
  EXPECT_EQ(levels.back(), 20);
  EXPECT_TRUE(std::is_sorted(levels.begin(), levels.end()));
}

}  // namespace
}  // namespace liftdd
