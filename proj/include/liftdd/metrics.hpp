#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftdd/reduce.hpp"

namespace liftdd {

// Time to failure of the original and a reduced input, measured from each
// run's own simulation start.
struct TirrReport {
  double tet_fail_original = 0;  // simulated seconds
  double tet_fail_reduced = 0;
  double tirr_ft = 0;
  double wall_original = 0;  // seconds of host time, stop-at-failure runs
  double wall_reduced = 0;
  double wall_tirr_ft = 0;
};

// 1 - reduced / original; original must be positive.
double tirr_ratio(double tet_fail_original, double tet_fail_reduced);

// Throws ValidationError if `reduced` does not fail under the context oracle.
TirrReport tirr_ft(const ReductionContext& ctx, const TestInput& reduced,
                   const std::optional<Checkpoint>& checkpoint = std::nullopt);

// Vargha-Delaney effect size oriented so that 1 means every value of `a` is
// smaller (faster) than every value of `b`: P(a < b) + 0.5 P(a == b).
double a12(const std::vector<double>& a, const std::vector<double>& b);

struct SampleStats {
  double median = 0;
  double mean = 0;
  double stddev = 0;  // sample standard deviation, 0 for a single value
};

SampleStats summarize(const std::vector<double>& samples);

nlohmann::json to_json(const TirrReport& t);

// ---- comparison harness ---------------------------------------------------

struct NamedScenario {
  std::string name;
  ReductionContext ctx;
};

struct ComparisonRow {
  std::string test;
  double threshold = 0;
  Algorithm algorithm = Algorithm::backward;
  std::vector<double> wall_samples;
  SampleStats wall;
  double tirr_ft = 0;
  std::size_t passengers = 0;
  std::size_t simulations = 0;
  double simulated_seconds = 0;
  double a12_vs_baseline = 0.5;
};

inline constexpr const char* kComparisonCsvHeader =
    "test,threshold,algorithm,median_s,mean_s,std_s,tirr_ft,passengers";

struct ComparisonTable {
  Algorithm baseline = Algorithm::backward;
  std::size_t repetitions = 0;
  std::vector<ComparisonRow> rows;

  void write_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
};

const std::vector<double>& default_thresholds();

// Full factorial over scenarios x thresholds x algorithms, `repetitions` runs
// per cell. Throws SoundnessViolation if any reduced input passes and Error
// if a repetition disagrees on the deterministic columns.
ComparisonTable run_comparison(const std::vector<NamedScenario>& scenarios,
                               const std::vector<Algorithm>& algorithms,
                               const std::vector<double>& thresholds, std::size_t repetitions,
                               Algorithm baseline = Algorithm::backward);

}  // namespace liftdd
