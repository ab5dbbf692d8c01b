#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "liftdd/errors.hpp"
#include "liftdd/reduce.hpp"
#include "support.hpp"

namespace liftdd {
namespace {

using testing::building;
using testing::fault;
using testing::id_range;
using testing::pax;
using testing::wt_oracle;

TestInput first_seven() { return testing::running_example().filter([](const Passenger& p) { return p.id <= 7; }); }

// ---- split primitives -------------------------------------------------------

TEST(Split, OnFailureDropsLaterArrivals) {
  const TestInput ti = testing::running_example();
  EXPECT_EQ(split_on_failure(ti, 12320).ids(), id_range(1, 7));
  EXPECT_EQ(split_on_failure(ti, 12365).ids(), id_range(1, 8));
  EXPECT_TRUE(split_on_failure(ti, 11944).empty());
}

TEST(Split, TimeBasedHalves) {
  const TestInput ti = first_seven();
  const double sim_time = 12210 - 11945;
  // First split at 11945 + 265/2 = 12077.5.
  const TestInput half = split_min_time(ti, sim_time, 1);
  EXPECT_EQ(half.ids(), id_range(4, 7));
  // If p4..p7 passes, the next candidate reaches back to 12080 - 265/4.
  EXPECT_EQ(split_max_time(half, ti, sim_time, 2).ids(), id_range(3, 7));
  // If it fails, the next candidate starts after 12080 + 265/4.
  EXPECT_EQ(split_min_time(half, sim_time, 2).ids(), std::vector<int>{7});
}

TEST(Split, TimeBasedEdgeCases) {
  const TestInput ti = first_seven();
  EXPECT_TRUE(split_min_time(TestInput(), 10, 1).empty());
  EXPECT_THROW(split_min_time(ti, 265, 0), ValidationError);
  // An empty candidate grows back from the last arrival.
  EXPECT_EQ(split_max_time(TestInput(), ti, 265, 2).ids(), std::vector<int>{7});
  EXPECT_EQ(split_max_time(TestInput(), ti, 265, 1).ids(), id_range(4, 7));
  EXPECT_TRUE(split_max_time(TestInput(), TestInput(), 265, 1).empty());
}

TEST(Split, EventBasedHalves) {
  const TestInput ti = first_seven();
  EXPECT_EQ(split_min_event(ti, 4).ids(), id_range(4, 7));
  EXPECT_EQ(split_max_event(4, ti, 2).ids(), id_range(2, 7));
  EXPECT_EQ(split_max_event(6, ti, 4).ids(), id_range(1, 7));
  EXPECT_EQ(split_min_event(ti, 0), ti);
  EXPECT_EQ(split_min_event(ti, 1), ti);
  EXPECT_EQ(split_min_event(ti, 7).ids(), std::vector<int>{7});
  EXPECT_THROW(split_min_event(ti, 8), ValidationError);
}

// ---- search loops on synthetic predicates ---------------------------------

TestInput evenly_spaced(int n, ArrivalTime step = 10) {
  std::vector<Passenger> ps;
  for (int i = 1; i <= n; ++i) ps.push_back(pax(i, 1000 + step * i, 1 + i % 2, 3));
  return TestInput(ps);
}

// Fails iff passenger `key` is present: monotone over suffixes, with the
// suffix starting at `key` as the unique minimum.
FailureTest contains(int key, int* calls = nullptr) {
  return [key, calls](const TestInput& c) {
    if (calls) ++*calls;
    const auto ids = c.ids();
    return std::find(ids.begin(), ids.end(), key) != ids.end();
  };
}

// Hand-traced on eight passengers. A failure at splitSize 1 makes the next
// candidate the whole current input, so the search stops there.
TEST(Search, EventBasedTraces) {
  const struct {
    int key;
    std::vector<int> expected;
    std::size_t iterations;
  } cases[] = {
      {8, id_range(5, 8), 2},  // {4..8} F, {5..8} F, stop
      {6, id_range(5, 8), 2},
      {5, id_range(5, 8), 2},
      {3, id_range(2, 8), 2},  // {4..8} P, {2..8} F, stop
      {1, id_range(1, 8), 2},  // {4..8} P, {2..8} P, grows back to {1..8}
  };
  for (const auto& c : cases) {
    SearchState s;
    search_event(evenly_spaced(8), contains(c.key), s);
    EXPECT_TRUE(s.converged) << c.key;
    EXPECT_EQ(s.final.ids(), c.expected) << c.key;
    EXPECT_EQ(s.iterations, c.iterations) << c.key;
  }
}

TEST(Search, EventBasedKeepsFailureAndConverges) {
  for (int n = 1; n <= 24; ++n) {
    for (int key = 1; key <= n; ++key) {
      SearchState s;
      int calls = 0;
      search_event(evenly_spaced(n), contains(key, &calls), s);
      EXPECT_TRUE(s.converged) << n << "/" << key;
      EXPECT_TRUE(contains(key)(s.final)) << n << "/" << key;
      const auto ids = s.final.ids();
      ASSERT_FALSE(ids.empty());
      EXPECT_EQ(ids, id_range(ids.front(), n)) << "not a suffix";
      EXPECT_EQ(static_cast<std::size_t>(calls), s.iterations);
    }
  }
}

TEST(Search, TimeBasedKeepsFailureAndConverges) {
  for (int n = 1; n <= 24; ++n) {
    for (int key = 1; key <= n; ++key) {
      SearchState s;
      search_time(evenly_spaced(n), contains(key), s);
      EXPECT_TRUE(s.converged) << n << "/" << key;
      EXPECT_TRUE(contains(key)(s.final)) << n << "/" << key;
      const auto ids = s.final.ids();
      ASSERT_FALSE(ids.empty());
      EXPECT_EQ(ids, id_range(ids.front(), n)) << "not a suffix";
    }
  }
}

TEST(Search, TimeBasedIsMinimalWhenTheKeyIsLast) {
  for (int n = 1; n <= 24; ++n) {
    SearchState s;
    search_time(evenly_spaced(n), contains(n), s);
    EXPECT_EQ(s.final.ids(), std::vector<int>{n}) << n;
  }
}

TEST(Search, ExceptionsKeepProgress) {
  SearchState s;
  int calls = 0;
  const FailureTest flaky = [&](const TestInput& c) {
    if (++calls == 2) throw std::runtime_error("stop");
    return !c.empty();
  };
  EXPECT_THROW(search_event(evenly_spaced(16), flaky, s), std::runtime_error);
  EXPECT_EQ(s.final.ids(), id_range(8, 16));
  EXPECT_EQ(s.iterations, 1u);
}

// ---- algorithms on the simulator ------------------------------------------

class RunningExample : public ::testing::Test {
 protected:
  void SetUp() override {
    FaultConfig f = fault(FaultKind::dead_car, 0);
    f.reassign_after = 200;
    ctx_ = make_context(testing::running_example(), building(10, 3), f, wt_oracle(200));
  }
  bool fails(const ReductionContext& ctx, const TestInput& ti) const {
    return judge(replay(ctx, ti, std::nullopt, false), ctx.oracle).failed();
  }
  ReductionContext ctx_;
};

TEST_F(RunningExample, ContextTakesReferenceFromWorstWait) {
  EXPECT_DOUBLE_EQ(ctx_.oracle.references.at(Metric::max_waiting_time), 204.0);
  EXPECT_DOUBLE_EQ(ctx_.failing_time(), 12414.0);
  EXPECT_EQ(*ctx_.original_verdict.conflicting_passenger, 7);
  const ReductionContext lax = at_threshold(ctx_, 5);
  EXPECT_DOUBLE_EQ(lax.failing_time(), 12147.0);
  EXPECT_EQ(*lax.original_verdict.conflicting_passenger, 1);
  EXPECT_EQ(lax.oracle.references, ctx_.oracle.references);
}

TEST_F(RunningExample, EveryAlgorithmIsSoundAndReturnsASuffix) {
  for (double theta : {0.0, 5.0, 20.0}) {
    const ReductionContext ctx = at_threshold(ctx_, theta);
    const auto split = split_on_failure(ctx.original, ctx.failing_time()).ids();
    for (Algorithm a : all_algorithms()) {
      const ReductionResult r = reduce(ctx, a);
      EXPECT_TRUE(r.converged);
      EXPECT_FALSE(r.budget_exhausted);
      EXPECT_LE(r.final.np(), split.size());
      const auto ids = r.final.ids();
      ASSERT_FALSE(ids.empty());
      EXPECT_TRUE(std::equal(ids.rbegin(), ids.rend(), split.rbegin())) << to_string(a);
      EXPECT_TRUE(judge(replay(ctx, r.final, r.checkpoint, false), ctx.oracle).failed());
      const auto log_sims = std::count_if(r.log.begin(), r.log.end(),
                                          [](const IterationRecord& rec) { return rec.simulated; });
      EXPECT_EQ(static_cast<std::size_t>(log_sims), r.simulations_executed);
      for (const auto& rec : r.log) {
        if (rec.candidate_size == 0) EXPECT_FALSE(rec.simulated);
      }
    }
  }
}

// Enumerates every suffix that starts at or before the conflicting passenger
// and keeps the shortest one that fails.
TEST_F(RunningExample, BackwardMatchesEnumeration) {
  for (double theta : {0.0, 5.0, 20.0}) {
    const ReductionContext ctx = at_threshold(ctx_, theta);
    const TestInput split = split_on_failure(ctx.original, ctx.failing_time());
    const auto ids = split.ids();
    const std::size_t c = static_cast<std::size_t>(
        std::find(ids.begin(), ids.end(), *ctx.original_verdict.conflicting_passenger) - ids.begin());
    std::optional<TestInput> expected;
    for (std::size_t k = 0; k <= c; ++k) {
      if (fails(ctx, split.suffix(k))) expected = split.suffix(k);
    }
    ASSERT_TRUE(expected);
    EXPECT_EQ(reduce(ctx, Algorithm::backward).final, *expected) << theta;
  }
}

TEST_F(RunningExample, Deterministic) {
  for (Algorithm a : all_algorithms()) {
    const ReductionResult x = reduce(ctx_, a);
    const ReductionResult y = reduce(ctx_, a);
    EXPECT_EQ(x.final, y.final);
    EXPECT_EQ(x.simulations_executed, y.simulations_executed);
    EXPECT_EQ(x.iterations, y.iterations);
    EXPECT_EQ(x.checkpoint, y.checkpoint);
  }
}

TEST_F(RunningExample, EnvironmentWiseUsesTheStaticState) {
  const ReductionResult r = reduce(ctx_, Algorithm::ewdd_event);
  EXPECT_EQ(r.static_states_found, 1u);
  ASSERT_TRUE(r.static_state_used);
  ASSERT_TRUE(r.checkpoint);
  EXPECT_FALSE(r.fell_back);
  // The dead car holds p7 until after 12364, so the only rest is before p7.
  EXPECT_EQ(r.checkpoint->start_time, 12209);
  EXPECT_EQ(r.final.ids(), id_range(7, 10));
  for (const auto& p : r.final) EXPECT_GT(p.at, r.checkpoint->start_time);
  ASSERT_FALSE(r.log.empty());
  EXPECT_EQ(r.log.front().static_state, 1);
}

TEST_F(RunningExample, NoStaticStateMeansPlainDeltaDebugging) {
  const ReductionContext ctx = at_threshold(ctx_, 5);
  for (auto [ew, dd] : {std::pair{Algorithm::ewdd_time, Algorithm::dd_time},
                        std::pair{Algorithm::ewdd_event, Algorithm::dd_event}}) {
    const ReductionResult e = reduce(ctx, ew);
    const ReductionResult d = reduce(ctx, dd);
    EXPECT_EQ(e.static_states_found, 0u);
    EXPECT_FALSE(e.checkpoint);
    EXPECT_EQ(e.final, d.final);
    EXPECT_EQ(e.simulations_executed, d.simulations_executed);
  }
}

TEST_F(RunningExample, BudgetStopsTheSearch) {
  ReductionContext ctx = at_threshold(ctx_, 5);
  ctx.budget = 1;
  const ReductionResult r = reduce(ctx, Algorithm::dd_time);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.simulations_executed, 1u);
  EXPECT_TRUE(fails(ctx, r.final));
  ctx.budget = 0;
  const ReductionResult none = reduce(ctx, Algorithm::dd_event);
  EXPECT_TRUE(none.budget_exhausted);
  EXPECT_EQ(none.final, split_on_failure(ctx.original, ctx.failing_time()));
}

TEST_F(RunningExample, JsonReport) {
  const auto j = to_json(reduce(ctx_, Algorithm::ewdd_time));
  EXPECT_EQ(j.at("algorithm"), "ewdd-time");
  EXPECT_TRUE(j.contains("checkpoint"));
  EXPECT_EQ(j.at("final_ids").size(), j.at("final_np").get<std::size_t>());
  EXPECT_FALSE(j.at("log").empty());
}

TEST(Reduce, PassingInputIsRejected) {
  EXPECT_THROW(make_context(testing::running_example(), building(10, 3), fault(FaultKind::none),
                            wt_oracle(70)),
               NotFailureInducing);
  ReductionContext ctx;
  EXPECT_THROW(reduce(ctx, Algorithm::dd_event), NotFailureInducing);
}

TEST(Reduce, SinglePassengerIsAlreadyMinimal) {
  // One call answered by a dead car waits out the supervision timer.
  FaultConfig f = fault(FaultKind::dead_car, 0);
  BuildingConfig b = building(10, 2);
  b.cars[1].home_floor = 10;
  const ReductionContext ctx = make_context(TestInput({pax(1, 100, 1, 5)}), b, f, wt_oracle(70));
  for (Algorithm a : all_algorithms()) {
    const ReductionResult r = reduce(ctx, a);
    EXPECT_EQ(r.final.ids(), std::vector<int>{1}) << to_string(a);
    EXPECT_LE(r.simulations_executed, 2u) << to_string(a);
  }
}

TEST(Reduce, AlgorithmNames) {
  for (Algorithm a : all_algorithms()) EXPECT_EQ(algorithm_from_string(to_string(a)), a);
  EXPECT_THROW(algorithm_from_string("bisect"), ConfigError);
  EXPECT_EQ(all_algorithms().size(), 5u);
}

// A stateful dispatcher may pass from every static state; the search then
// runs from the beginning and still returns a failing input.
TEST(Reduce, EnvironmentWiseFallsBackWhenNoStateReproduces) {
  const TestInput ti = load_test_input(testing::scenario_dir() / "traces" / "stale_fallback.csv");
  const auto b = load_building(testing::scenario_dir() / "buildings" / "tower_20x2.json");
  const ReductionContext ctx =
      make_context(ti, b, fault(FaultKind::stale_assignment), wt_oracle(30));
  for (Algorithm a : {Algorithm::ewdd_time, Algorithm::ewdd_event}) {
    const ReductionResult r = reduce(ctx, a);
    EXPECT_TRUE(r.fell_back) << to_string(a);
    EXPECT_FALSE(r.checkpoint);
    ASSERT_GE(r.static_states_found, 2u);
    std::vector<int> visited;
    for (const auto& rec : r.log) {
      if (rec.static_state) {
        EXPECT_EQ(rec.verdict, VerdictResult::pass);
        visited.push_back(*rec.static_state);
      }
    }
    std::vector<int> expected;
    for (int k = static_cast<int>(r.static_states_found); k >= 1; --k) expected.push_back(k);
    EXPECT_EQ(visited, expected);
    EXPECT_TRUE(judge(replay(ctx, r.final, std::nullopt, false), ctx.oracle).failed());
  }
}

}  // namespace
}  // namespace liftdd
