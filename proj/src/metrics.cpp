#include "liftdd/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "liftdd/errors.hpp"

namespace liftdd {

namespace {

struct TimedFailure {
  double tet = 0;
  double wall = 0;
};

TimedFailure time_to_failure(const ReductionContext& ctx, const TestInput& ti,
                             const std::optional<Checkpoint>& checkpoint) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimOutcome out = replay(ctx, ti, checkpoint, true);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Verdict v = judge(out, ctx.oracle);
  if (!v.failed()) throw ValidationError("input does not fail under the oracle");
  return {*v.failing_time - out.sim_start, wall};
}

}  // namespace

double tirr_ratio(double tet_fail_original, double tet_fail_reduced) {
  if (!(tet_fail_original > 0)) throw ValidationError("original time to failure must be positive");
  return 1.0 - tet_fail_reduced / tet_fail_original;
}

TirrReport tirr_ft(const ReductionContext& ctx, const TestInput& reduced,
                   const std::optional<Checkpoint>& checkpoint) {
  const TimedFailure orig = time_to_failure(ctx, ctx.original, std::nullopt);
  const TimedFailure red = time_to_failure(ctx, reduced, checkpoint);
  TirrReport t;
  t.tet_fail_original = orig.tet;
  t.tet_fail_reduced = red.tet;
  t.tirr_ft = tirr_ratio(orig.tet, red.tet);
  t.wall_original = orig.wall;
  t.wall_reduced = red.wall;
  t.wall_tirr_ft = orig.wall > 0 ? 1.0 - red.wall / orig.wall : 0.0;
  return t;
}

double a12(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ValidationError("a12: samples must be nonempty");
  // Midranks over the pooled sample; the rank sum of `b` counts how often a
  // value of `b` exceeds one of `a`.
  std::vector<std::pair<double, bool>> pooled;
  for (double x : a) pooled.emplace_back(x, false);
  for (double x : b) pooled.emplace_back(x, true);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  double rank_sum_b = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_b += midrank;
    }
    i = j;
  }
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  return (rank_sum_b / n - (n + 1) / 2.0) / m;
}

SampleStats summarize(const std::vector<double>& samples) {
  if (samples.empty()) throw ValidationError("summarize: no samples");
  SampleStats s;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0;
    for (double x : sorted) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

nlohmann::json to_json(const TirrReport& t) {
  return {{"tet_fail_original", t.tet_fail_original},
          {"tet_fail_reduced", t.tet_fail_reduced},
          {"tirr_ft", t.tirr_ft},
          {"wall_original", t.wall_original},
          {"wall_reduced", t.wall_reduced},
          {"wall_tirr_ft", t.wall_tirr_ft}};
}

// ---- comparison harness ---------------------------------------------------

const std::vector<double>& default_thresholds() {
  static const std::vector<double> levels = {5, 7, 9, 10, 11, 13, 15, 17, 19, 20};
  return levels;
}

void ComparisonTable::write_csv(std::ostream& out) const {
  out << kComparisonCsvHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{:g},{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", r.test, r.threshold,
                       to_string(r.algorithm), r.wall.median, r.wall.mean, r.wall.stddev, r.tirr_ft,
                       r.passengers);
  }
}

nlohmann::json ComparisonTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"test", r.test},
                   {"threshold", r.threshold},
                   {"algorithm", liftdd::to_string(r.algorithm)},
                   {"wall_samples", r.wall_samples},
                   {"median_s", r.wall.median},
                   {"mean_s", r.wall.mean},
                   {"std_s", r.wall.stddev},
                   {"tirr_ft", r.tirr_ft},
                   {"passengers", r.passengers},
                   {"simulations", r.simulations},
                   {"simulated_seconds", r.simulated_seconds},
                   {"a12_vs_baseline", r.a12_vs_baseline}});
  }
  return {{"baseline", liftdd::to_string(baseline)},
          {"repetitions", repetitions},
          {"rows", out}};
}

ComparisonTable run_comparison(const std::vector<NamedScenario>& scenarios,
                               const std::vector<Algorithm>& algorithms,
                               const std::vector<double>& thresholds, std::size_t repetitions,
                               Algorithm baseline) {
  if (scenarios.empty()) throw ConfigError("comparison needs at least one scenario");
  if (repetitions == 0) throw ConfigError("comparison needs at least one repetition");
  ComparisonTable table;
  table.baseline = baseline;
  table.repetitions = repetitions;
  for (const auto& sc : scenarios) {
    for (double theta : thresholds) {
      const ReductionContext ctx = at_threshold(sc.ctx, theta);
      const std::size_t first_row = table.rows.size();
      std::optional<std::vector<double>> baseline_samples;
      for (Algorithm algorithm : algorithms) {
        ComparisonRow row;
        row.test = sc.name;
        row.threshold = theta;
        row.algorithm = algorithm;
        std::optional<ReductionResult> first;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
          ReductionResult r = reduce(ctx, algorithm);
          row.wall_samples.push_back(r.wall_seconds);
          if (!first) {
            first = std::move(r);
          } else if (r.final != first->final || r.simulations_executed != first->simulations_executed) {
            throw Error(sc.name + ": " + to_string(algorithm) + " is not deterministic");
          }
        }
        row.wall = summarize(row.wall_samples);
        row.tirr_ft = tirr_ft(ctx, first->final, first->checkpoint).tirr_ft;
        row.passengers = first->final.np();
        row.simulations = first->simulations_executed;
        row.simulated_seconds = first->simulated_seconds_total;
        if (algorithm == baseline) baseline_samples = row.wall_samples;
        spdlog::info("{} theta={:g} {}: np {} -> {}, sims={}, tirr_ft={:.4f}", sc.name, theta,
                     to_string(algorithm), ctx.original.np(), row.passengers, row.simulations,
                     row.tirr_ft);
        table.rows.push_back(std::move(row));
      }
      if (baseline_samples) {
        for (std::size_t i = first_row; i < table.rows.size(); ++i) {
          table.rows[i].a12_vs_baseline = a12(table.rows[i].wall_samples, *baseline_samples);
        }
      }
    }
  }
  return table;
}

}  // namespace liftdd
