#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftdd/sim.hpp"

namespace liftdd {

enum class Metric { max_waiting_time, max_transit_time };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& name);

struct Requirement {
  Metric metric = Metric::max_waiting_time;
  double limit = 70.0;  // seconds

  bool operator==(const Requirement&) const = default;
};

// value in [-1, 0]; 0 iff observed <= limit.
struct Severity {
  double value = 0;
  double observed = 0;
  Requirement requirement;

  bool operator==(const Severity&) const = default;
};

enum class VerdictResult { pass, fail };

struct Verdict {
  VerdictResult result = VerdictResult::pass;
  std::optional<double> failing_time;
  std::optional<int> conflicting_passenger;
  std::optional<Metric> failing_metric;
  std::vector<Severity> severities;  // one per requirement

  bool failed() const noexcept { return result == VerdictResult::fail; }
  bool operator==(const Verdict&) const = default;
};

struct OracleConfig {
  std::vector<Requirement> requirements;
  double threshold = 0;  // percent in [0, 100)
  // Worst observed value per metric in the original failing run. A metric
  // without a reference fires on the plain limit.
  std::map<Metric, double> references;
  // Overshoot, as a multiple of the limit, at which severity saturates at -1.
  double severity_scale = 1.0;

  void validate() const;
  bool operator==(const OracleConfig&) const = default;
};

Severity severity(const SimOutcome& outcome, const Requirement& req, double scale = 1.0);

// Whether a single metric observation triggers the requirement under `cfg`.
bool fires(double value, const Requirement& req, const OracleConfig& cfg);

Verdict judge(const SimOutcome& outcome, const OracleConfig& cfg);

// Per-metric worst values of a failing run, for the violated requirements
// only. Throws NotFailureInducing if nothing is violated.
std::map<Metric, double> make_reference(const SimOutcome& outcome,
                                        const std::vector<Requirement>& requirements);

// Halts a simulation as soon as an observation fires, so a failing candidate
// costs only the simulated time up to its failure.
class FailureMonitor : public RunMonitor {
 public:
  explicit FailureMonitor(const OracleConfig& cfg) : cfg_(cfg) {}
  bool on_boarded(const BoardedPassenger& b) override;
  bool on_delivered(const PassengerOutcome& o) override;

 private:
  const OracleConfig& cfg_;
};

OracleConfig oracle_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OracleConfig& cfg);
OracleConfig load_oracle(const std::filesystem::path& path);
nlohmann::json to_json(const Verdict& v);

}  // namespace liftdd
