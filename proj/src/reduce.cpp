#include "liftdd/reduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <utility>

#include <spdlog/spdlog.h>

#include "liftdd/errors.hpp"

namespace liftdd {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::backward: return "backward";
    case Algorithm::dd_time: return "dd-time";
    case Algorithm::dd_event: return "dd-event";
    case Algorithm::ewdd_time: return "ewdd-time";
    case Algorithm::ewdd_event: return "ewdd-event";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {Algorithm::backward, Algorithm::dd_time,
                                             Algorithm::dd_event, Algorithm::ewdd_time,
                                             Algorithm::ewdd_event};
  return all;
}

ReductionContext make_context(TestInput original, BuildingConfig building, FaultConfig fault,
                              OracleConfig oracle, std::optional<std::size_t> budget) {
  ReductionContext ctx;
  ctx.original_outcome = execute_test(original, building, fault);
  if (oracle.references.empty()) {
    oracle.references = make_reference(ctx.original_outcome, oracle.requirements);
  }
  oracle.validate();
  ctx.original_verdict = judge(ctx.original_outcome, oracle);
  if (!ctx.original_verdict.failed()) throw NotFailureInducing("input is not failure-inducing");
  ctx.building = std::move(building);
  ctx.fault = std::move(fault);
  ctx.oracle = std::move(oracle);
  ctx.original = std::move(original);
  ctx.budget = budget;
  return ctx;
}

ReductionContext at_threshold(const ReductionContext& ctx, double threshold) {
  ReductionContext out = ctx;
  out.oracle.threshold = threshold;
  out.oracle.validate();
  out.original_verdict = judge(out.original_outcome, out.oracle);
  if (!out.original_verdict.failed()) throw NotFailureInducing("input is not failure-inducing");
  return out;
}

// ---- split primitives -----------------------------------------------------

TestInput split_on_failure(const TestInput& ti, double failing_time) {
  return ti.filter([&](const Passenger& p) { return static_cast<double>(p.at) <= failing_time; });
}

TestInput split_min_time(const TestInput& ti, double sim_time, int it) {
  if (ti.empty()) return ti;
  if (it < 1) throw ValidationError("split_min_time: iteration must be >= 1");
  const double split = static_cast<double>(ti.front().at) + std::ldexp(sim_time, -it);
  return ti.filter([&](const Passenger& p) { return static_cast<double>(p.at) > split; });
}

TestInput split_max_time(const TestInput& ti_new, const TestInput& ti_prev, double sim_time,
                         int it) {
  if (ti_prev.empty()) return ti_prev;
  if (it < 1) throw ValidationError("split_max_time: iteration must be >= 1");
  const ArrivalTime anchor = ti_new.empty() ? ti_prev.back().at : ti_new.front().at;
  const double split = static_cast<double>(anchor) - std::ldexp(sim_time, -it);
  return ti_prev.filter([&](const Passenger& p) { return static_cast<double>(p.at) > split; });
}

TestInput split_min_event(const TestInput& ti, std::size_t split_size) {
  if (split_size > ti.np()) throw ValidationError("split_min_event: split size exceeds np");
  return ti.suffix(split_size == 0 ? 0 : split_size - 1);
}

TestInput split_max_event(std::size_t size_ti, const TestInput& ti_prev, std::size_t split_size) {
  const std::size_t keep = std::min(ti_prev.np(), size_ti + split_size);
  return ti_prev.suffix(ti_prev.np() - keep);
}

// ---- execution ------------------------------------------------------------

SimOutcome replay(const ReductionContext& ctx, const TestInput& ti,
                  const std::optional<Checkpoint>& checkpoint, bool stop_at_failure) {
  FailureMonitor monitor(ctx.oracle);
  ExecuteOptions opt;
  opt.checkpoint = checkpoint;
  opt.monitor = stop_at_failure ? &monitor : nullptr;
  opt.record_env_log = false;
  return execute_test(ti, ctx.building, ctx.fault, opt);
}

namespace {

std::size_t iteration_cap(double sim_time, std::size_t np) {
  return static_cast<std::size_t>(std::ceil(std::log2(std::max(2.0, sim_time)))) + np;
}

}  // namespace

void search_time(TestInput ti, const FailureTest& fails, SearchState& state) {
  state.final = ti;
  if (ti.np() <= 1) return;
  const double sim_time = static_cast<double>(ti.back().at - ti.front().at);
  const std::size_t cap = iteration_cap(sim_time, ti.np());
  std::size_t steps = 0;
  int it = 1;
  TestInput ti_new = split_min_time(ti, sim_time, it);
  while (ti.np() != ti_new.np()) {
    if (steps == cap) {
      spdlog::warn("dd-time: no convergence after {} iterations, keeping np={}", cap, ti.np());
      state.converged = false;
      return;
    }
    const bool failed = fails(ti_new);
    ++steps;
    ++state.iterations;
    ++it;
    if (failed) {
      ti = ti_new;
      state.final = ti;
      ti_new = split_min_time(ti_new, sim_time, it);
    } else {
      // The step only shrinks from here, so a candidate that did not grow
      // never will; re-testing it cannot change the outcome.
      TestInput grown = split_max_time(ti_new, ti, sim_time, it);
      if (grown == ti_new) return;
      ti_new = std::move(grown);
    }
  }
}

void search_event(TestInput ti, const FailureTest& fails, SearchState& state) {
  state.final = ti;
  if (ti.empty()) return;
  const std::size_t cap = iteration_cap(static_cast<double>(ti.np()), ti.np());
  std::size_t steps = 0;
  std::size_t split = (ti.np() + 1) / 2;
  TestInput ti_new = split_min_event(ti, split);
  while (ti.np() != ti_new.np()) {
    if (steps == cap) {
      spdlog::warn("dd-event: no convergence after {} iterations, keeping np={}", cap, ti.np());
      state.converged = false;
      return;
    }
    const bool failed = fails(ti_new);
    ++steps;
    ++state.iterations;
    split = (split + 1) / 2;
    if (failed) {
      ti = ti_new;
      state.final = ti;
      ti_new = split_min_event(ti_new, split);
    } else {
      ti_new = split_max_event(ti_new.np(), ti, split);
    }
  }
}

namespace {

struct BudgetExhausted {};

// Runs candidates against the SUT and records every verdict in the result.
// Identical (checkpoint, passenger set) pairs are simulated once.
class Executor {
 public:
  Executor(const ReductionContext& ctx, ReductionResult& result) : ctx_(ctx), result_(result) {}

  void set_checkpoint(std::optional<Checkpoint> cp, int key) {
    checkpoint_ = std::move(cp);
    key_ = key;
  }

  bool fails(const TestInput& candidate, std::optional<int> static_state = {}) {
    IterationRecord rec;
    rec.candidate_size = candidate.np();
    rec.static_state = static_state;
    if (!candidate.empty()) {
      auto key = std::make_pair(key_, candidate.ids());
      auto hit = cache_.find(key);
      if (hit != cache_.end()) {
        rec.verdict = hit->second;
      } else {
        if (ctx_.budget && result_.simulations_executed >= *ctx_.budget) throw BudgetExhausted{};
        const SimOutcome out = replay(ctx_, candidate, checkpoint_, ctx_.stop_at_failure);
        rec.verdict = judge(out, ctx_.oracle).result;
        rec.simulated = true;
        rec.simulated_seconds = out.simulated_duration;
        ++result_.simulations_executed;
        result_.simulated_seconds_total += out.simulated_duration;
        cache_.emplace(std::move(key), rec.verdict);
      }
    }
    spdlog::debug("{}: candidate np={} -> {}{}", to_string(result_.algorithm), rec.candidate_size,
                  rec.verdict == VerdictResult::fail ? "fail" : "pass",
                  rec.simulated ? "" : " (not simulated)");
    result_.log.push_back(rec);
    return rec.verdict == VerdictResult::fail;
  }

 private:
  const ReductionContext& ctx_;
  ReductionResult& result_;
  std::optional<Checkpoint> checkpoint_;
  int key_ = 0;
  std::map<std::pair<int, std::vector<int>>, VerdictResult> cache_;
};

void absorb(ReductionResult& r, const SearchState& s) {
  r.final = s.final;
  r.iterations += s.iterations;
  r.converged = r.converged && s.converged;
}

void dd_from(DdFlavor flavor, TestInput ti, Executor& ex, ReductionResult& r) {
  SearchState s;
  const FailureTest fails = [&](const TestInput& c) { return ex.fails(c); };
  try {
    if (flavor == DdFlavor::time) {
      search_time(std::move(ti), fails, s);
    } else {
      search_event(std::move(ti), fails, s);
    }
  } catch (...) {
    absorb(r, s);
    throw;
  }
  absorb(r, s);
}

TestInput split_or_throw(const ReductionContext& ctx) {
  TestInput ti = split_on_failure(ctx.original, ctx.failing_time());
  if (ti.empty()) throw SoundnessViolation("cannot reproduce: no passenger arrives before the failure");
  return ti;
}

template <typename Body>
ReductionResult run_guarded(const ReductionContext& ctx, Algorithm algorithm, Body body) {
  if (!ctx.original_verdict.failed() || !ctx.original_verdict.failing_time) {
    throw NotFailureInducing("input is not failure-inducing");
  }
  const auto t0 = std::chrono::steady_clock::now();
  ReductionResult r;
  r.algorithm = algorithm;
  Executor ex(ctx, r);
  try {
    body(ex, r);
  } catch (const BudgetExhausted&) {
    spdlog::warn("{}: simulation budget of {} exhausted", to_string(algorithm), *ctx.budget);
    r.budget_exhausted = true;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

ReductionResult dd_time(const ReductionContext& ctx) {
  return run_guarded(ctx, Algorithm::dd_time, [&](Executor& ex, ReductionResult& r) {
    dd_from(DdFlavor::time, split_or_throw(ctx), ex, r);
  });
}

ReductionResult dd_event(const ReductionContext& ctx) {
  return run_guarded(ctx, Algorithm::dd_event, [&](Executor& ex, ReductionResult& r) {
    dd_from(DdFlavor::event, split_or_throw(ctx), ex, r);
  });
}

ReductionResult ewdd(const ReductionContext& ctx, DdFlavor flavor) {
  const Algorithm algorithm = flavor == DdFlavor::time ? Algorithm::ewdd_time : Algorithm::ewdd_event;
  return run_guarded(ctx, algorithm, [&](Executor& ex, ReductionResult& r) {
    const TestInput ti = split_or_throw(ctx);
    r.final = ti;
    const auto states = detect_static_states(ctx.original_outcome, ctx.failing_time());
    r.static_states_found = states.size();
    for (auto s = states.rbegin(); s != states.rend(); ++s) {
      const Checkpoint cp = checkpoint_from(*s);
      const TestInput ti_new =
          ti.filter([&](const Passenger& p) { return p.at > s->t_end; });
      ex.set_checkpoint(cp, s->index);
      const bool failed = ex.fails(ti_new, s->index);
      ++r.iterations;
      if (failed) {
        r.checkpoint = cp;
        r.static_state_used = s->index;
        dd_from(flavor, ti_new, ex, r);
        return;
      }
    }
    r.fell_back = true;
    ex.set_checkpoint(std::nullopt, 0);
    dd_from(flavor, ti, ex, r);
  });
}

ReductionResult backward(const ReductionContext& ctx) {
  return run_guarded(ctx, Algorithm::backward, [&](Executor& ex, ReductionResult& r) {
    const TestInput ti = split_or_throw(ctx);
    r.final = ti;
    const int conflict = *ctx.original_verdict.conflicting_passenger;
    const auto ids = ti.ids();
    const auto pos = std::find(ids.begin(), ids.end(), conflict);
    if (pos == ids.end()) {
      throw SoundnessViolation("conflicting passenger " + std::to_string(conflict) +
                               " arrives after the failure");
    }
    for (std::size_t k = static_cast<std::size_t>(pos - ids.begin()) + 1; k-- > 0;) {
      TestInput candidate = ti.suffix(k);
      const bool failed = ex.fails(candidate);
      ++r.iterations;
      if (failed) {
        r.final = std::move(candidate);
        return;
      }
    }
    throw SoundnessViolation("split input does not reproduce the failure");
  });
}

ReductionResult reduce(const ReductionContext& ctx, Algorithm algorithm) {
  ReductionResult r;
  switch (algorithm) {
    case Algorithm::backward: r = backward(ctx); break;
    case Algorithm::dd_time: r = dd_time(ctx); break;
    case Algorithm::dd_event: r = dd_event(ctx); break;
    case Algorithm::ewdd_time: r = ewdd(ctx, DdFlavor::time); break;
    case Algorithm::ewdd_event: r = ewdd(ctx, DdFlavor::event); break;
  }
  const Verdict v = judge(replay(ctx, r.final, r.checkpoint, false), ctx.oracle);
  if (!v.failed()) {
    throw SoundnessViolation(to_string(algorithm) + ": reduced input (np=" +
                             std::to_string(r.final.np()) + ") no longer fails");
  }
  if (r.final.np() > ctx.original.np()) {
    throw SoundnessViolation(to_string(algorithm) + ": reduced input grew");
  }
  return r;
}

nlohmann::json to_json(const ReductionResult& r) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& rec : r.log) {
    nlohmann::json e = {{"candidate_size", rec.candidate_size},
                        {"verdict", rec.verdict == VerdictResult::fail ? "fail" : "pass"},
                        {"simulated", rec.simulated},
                        {"simulated_seconds", rec.simulated_seconds}};
    if (rec.static_state) e["static_state"] = *rec.static_state;
    log.push_back(std::move(e));
  }
  nlohmann::json j = {{"algorithm", to_string(r.algorithm)},
                      {"final_np", r.final.np()},
                      {"final_ids", r.final.ids()},
                      {"iterations", r.iterations},
                      {"simulations_executed", r.simulations_executed},
                      {"simulated_seconds_total", r.simulated_seconds_total},
                      {"wall_seconds", r.wall_seconds},
                      {"converged", r.converged},
                      {"budget_exhausted", r.budget_exhausted},
                      {"static_states_found", r.static_states_found},
                      {"fell_back", r.fell_back},
                      {"log", log}};
  if (r.static_state_used) j["static_state_used"] = *r.static_state_used;
  if (r.checkpoint) {
    j["checkpoint"] = {{"start_time", r.checkpoint->start_time},
                       {"car_positions", r.checkpoint->car_positions}};
  }
  return j;
}

}  // namespace liftdd
