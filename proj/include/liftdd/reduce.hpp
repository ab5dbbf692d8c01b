#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftdd/oracle.hpp"
#include "liftdd/sim.hpp"
#include "liftdd/trace.hpp"

namespace liftdd {

enum class Algorithm { backward, dd_time, dd_event, ewdd_time, ewdd_event };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);
const std::vector<Algorithm>& all_algorithms();

// Everything a reduction needs: the system under test, the oracle with its
// references taken from the original run, and that run itself.
struct ReductionContext {
  BuildingConfig building;
  FaultConfig fault;
  OracleConfig oracle;
  TestInput original;
  SimOutcome original_outcome;  // complete run, env log included
  Verdict original_verdict;     // Fail under `oracle`
  std::optional<std::size_t> budget;  // max simulations per reduction
  bool stop_at_failure = true;

  double failing_time() const { return *original_verdict.failing_time; }
};

// Runs the original input to completion, fills in the references when the
// oracle has none, and checks that the input fails. Throws
// NotFailureInducing otherwise.
ReductionContext make_context(TestInput original, BuildingConfig building, FaultConfig fault,
                              OracleConfig oracle, std::optional<std::size_t> budget = {});

struct IterationRecord {
  std::size_t candidate_size = 0;
  VerdictResult verdict = VerdictResult::pass;
  bool simulated = false;         // false for cache hits and empty candidates
  double simulated_seconds = 0;
  std::optional<int> static_state;  // EWDD checkpoint attempts only
};

struct ReductionResult {
  Algorithm algorithm = Algorithm::backward;
  TestInput final;
  std::optional<Checkpoint> checkpoint;  // EWDD: environment the final input runs from
  std::size_t iterations = 0;
  std::size_t simulations_executed = 0;
  double simulated_seconds_total = 0;
  double wall_seconds = 0;
  std::vector<IterationRecord> log;
  bool converged = true;         // false when the iteration safeguard fired
  bool budget_exhausted = false;
  // EWDD bookkeeping.
  std::size_t static_states_found = 0;
  std::optional<int> static_state_used;
  bool fell_back = false;
};

// Same context judged at another threshold; the failing time and conflicting
// passenger may move earlier as the threshold grows.
ReductionContext at_threshold(const ReductionContext& ctx, double threshold);

// ---- split primitives -----------------------------------------------------

// Passengers whose call was registered no later than the failing time.
TestInput split_on_failure(const TestInput& ti, double failing_time);

// {p : p.at > first.at + sim_time / 2^it}
TestInput split_min_time(const TestInput& ti, double sim_time, int it);

// {p in ti_prev : p.at > ti_new.first.at - sim_time / 2^it}. An empty ti_new
// is anchored at the last passenger of ti_prev.
TestInput split_max_time(const TestInput& ti_new, const TestInput& ti_prev, double sim_time,
                         int it);

// Drops the first split_size - 1 passengers.
TestInput split_min_event(const TestInput& ti, std::size_t split_size);

// The last size_ti + split_size passengers of ti_prev.
TestInput split_max_event(std::size_t size_ti, const TestInput& ti_prev, std::size_t split_size);

// ---- search loops ---------------------------------------------------------

using FailureTest = std::function<bool(const TestInput&)>;

struct SearchState {
  TestInput final;  // smallest input known to fail so far
  std::size_t iterations = 0;
  bool converged = true;
};

// Prefix-trimming searches over a failing `ti`. `state` stays valid if
// `fails` throws. A search that hits its iteration safeguard stops with
// converged = false.
void search_time(TestInput ti, const FailureTest& fails, SearchState& state);
void search_event(TestInput ti, const FailureTest& fails, SearchState& state);

// ---- algorithms -----------------------------------------------------------

ReductionResult dd_time(const ReductionContext& ctx);
ReductionResult dd_event(const ReductionContext& ctx);

enum class DdFlavor { time, event };
ReductionResult ewdd(const ReductionContext& ctx, DdFlavor flavor);

ReductionResult backward(const ReductionContext& ctx);

// Runs `algorithm`, then re-executes its result and throws SoundnessViolation
// unless the oracle still fails.
ReductionResult reduce(const ReductionContext& ctx, Algorithm algorithm);

// Complete run of a reduced input in the environment it was reduced in.
SimOutcome replay(const ReductionContext& ctx, const TestInput& ti,
                  const std::optional<Checkpoint>& checkpoint, bool stop_at_failure);

nlohmann::json to_json(const ReductionResult& r);

}  // namespace liftdd
