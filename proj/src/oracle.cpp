#include "liftdd/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include "liftdd/errors.hpp"

namespace liftdd {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::max_waiting_time: return "max_waiting_time";
    case Metric::max_transit_time: return "max_transit_time";
  }
  return "?";
}

Metric metric_from_string(const std::string& name) {
  if (name == "max_waiting_time") return Metric::max_waiting_time;
  if (name == "max_transit_time") return Metric::max_transit_time;
  throw ConfigError("unknown metric '" + name + "'");
}

void OracleConfig::validate() const {
  std::set<Metric> seen;
  for (const auto& r : requirements) {
    if (!(r.limit > 0)) throw ConfigError(to_string(r.metric) + ": limit must be positive");
    if (!seen.insert(r.metric).second) {
      throw ConfigError(to_string(r.metric) + ": duplicate requirement");
    }
  }
  if (!(threshold >= 0 && threshold < 100)) throw ConfigError("threshold must be in [0, 100)");
  if (!(severity_scale > 0)) throw ConfigError("severity_scale must be positive");
  for (const auto& [metric, value] : references) {
    auto it = std::find_if(requirements.begin(), requirements.end(),
                           [&](const Requirement& r) { return r.metric == metric; });
    if (it == requirements.end()) {
      throw ConfigError("reference for " + to_string(metric) + " has no requirement");
    }
    if (!(value > it->limit)) {
      throw ConfigError("reference for " + to_string(metric) + " does not exceed its limit");
    }
  }
}

namespace {

// One observation of a requirement's metric: the value, when it became
// observable, and whose it is.
struct Observation {
  double value;
  double time;
  int passenger_id;
};

std::vector<Observation> observations(const SimOutcome& outcome, Metric metric) {
  std::vector<Observation> obs;
  if (metric == Metric::max_waiting_time) {
    for (const auto& o : outcome.outcomes) obs.push_back({o.wt, o.t_elev_arrived, o.passenger_id});
    for (const auto& b : outcome.in_transit) obs.push_back({b.wt, b.t_elev_arrived, b.passenger_id});
  } else {
    for (const auto& o : outcome.outcomes) {
      obs.push_back({o.tt, o.t_reached_destination, o.passenger_id});
    }
  }
  return obs;
}

double worst(const std::vector<Observation>& obs) {
  double w = 0;
  for (const auto& o : obs) w = std::max(w, o.value);
  return w;
}

}  // namespace

Severity severity(const SimOutcome& outcome, const Requirement& req, double scale) {
  Severity s;
  s.requirement = req;
  s.observed = worst(observations(outcome, req.metric));
  const double overshoot = (s.observed - req.limit) / (scale * req.limit);
  s.value = -std::min(1.0, std::max(0.0, overshoot));
  if (s.value == 0.0) s.value = 0.0;  // no negative zero in reports
  return s;
}

bool fires(double value, const Requirement& req, const OracleConfig& cfg) {
  if (!(value > req.limit)) return false;
  const auto ref = cfg.references.find(req.metric);
  if (ref == cfg.references.end()) return true;
  // (100 - θ)/100 keeps the 300 s / 5% boundary at exactly 285.
  return value >= ref->second * (100.0 - cfg.threshold) / 100.0;
}

Verdict judge(const SimOutcome& outcome, const OracleConfig& cfg) {
  Verdict v;
  std::optional<Observation> first;
  for (const auto& req : cfg.requirements) {
    v.severities.push_back(severity(outcome, req, cfg.severity_scale));
    for (const auto& o : observations(outcome, req.metric)) {
      if (!fires(o.value, req, cfg)) continue;
      if (!first || std::tie(o.time, o.passenger_id) < std::tie(first->time, first->passenger_id)) {
        first = o;
        v.failing_metric = req.metric;
      }
    }
  }
  if (first) {
    v.result = VerdictResult::fail;
    v.failing_time = first->time;
    v.conflicting_passenger = first->passenger_id;
  } else {
    v.failing_metric.reset();
  }
  return v;
}

std::map<Metric, double> make_reference(const SimOutcome& outcome,
                                        const std::vector<Requirement>& requirements) {
  std::map<Metric, double> refs;
  for (const auto& req : requirements) {
    const double w = worst(observations(outcome, req.metric));
    if (w > req.limit) refs[req.metric] = w;
  }
  if (refs.empty()) throw NotFailureInducing("input is not failure-inducing");
  return refs;
}

bool FailureMonitor::on_boarded(const BoardedPassenger& b) {
  return std::any_of(cfg_.requirements.begin(), cfg_.requirements.end(), [&](const Requirement& r) {
    return r.metric == Metric::max_waiting_time && fires(b.wt, r, cfg_);
  });
}

bool FailureMonitor::on_delivered(const PassengerOutcome& o) {
  return std::any_of(cfg_.requirements.begin(), cfg_.requirements.end(), [&](const Requirement& r) {
    return r.metric == Metric::max_transit_time && fires(o.tt, r, cfg_);
  });
}

// ---- JSON -----------------------------------------------------------------

OracleConfig oracle_from_json(const nlohmann::json& j) {
  OracleConfig cfg;
  try {
    for (const auto& r : j.at("requirements")) {
      cfg.requirements.push_back(
          {metric_from_string(r.at("metric").get<std::string>()), r.at("limit").get<double>()});
    }
    cfg.threshold = j.value("threshold", 0.0);
    cfg.severity_scale = j.value("severity_scale", 1.0);
    if (j.contains("references")) {
      for (const auto& [name, value] : j.at("references").items()) {
        cfg.references[metric_from_string(name)] = value.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("oracle: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const OracleConfig& cfg) {
  nlohmann::json reqs = nlohmann::json::array();
  for (const auto& r : cfg.requirements) {
    reqs.push_back({{"metric", to_string(r.metric)}, {"limit", r.limit}});
  }
  nlohmann::json refs = nlohmann::json::object();
  for (const auto& [m, v] : cfg.references) refs[to_string(m)] = v;
  return {{"requirements", reqs},
          {"threshold", cfg.threshold},
          {"references", refs},
          {"severity_scale", cfg.severity_scale}};
}

OracleConfig load_oracle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return oracle_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json sev = nlohmann::json::array();
  for (const auto& s : v.severities) {
    sev.push_back({{"metric", to_string(s.requirement.metric)},
                   {"limit", s.requirement.limit},
                   {"observed", s.observed},
                   {"value", s.value}});
  }
  nlohmann::json j = {{"result", v.failed() ? "fail" : "pass"}, {"severities", sev}};
  if (v.failing_time) j["failing_time"] = *v.failing_time;
  if (v.conflicting_passenger) j["conflicting_passenger"] = *v.conflicting_passenger;
  if (v.failing_metric) j["failing_metric"] = to_string(*v.failing_metric);
  return j;
}

}  // namespace liftdd
