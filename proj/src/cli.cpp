#include "liftdd/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "liftdd/errors.hpp"
#include "liftdd/metrics.hpp"
#include "liftdd/reduce.hpp"

namespace liftdd::cli {

namespace fs = std::filesystem;

namespace {

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

fs::path resolve_path(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// A path entry is read from disk; an object entry is used as is.
nlohmann::json section(const nlohmann::json& entry, const fs::path& base, const char* what) {
  if (entry.is_object()) return entry;
  if (entry.is_string()) return read_json(resolve_path(base, entry.get<std::string>()));
  throw ConfigError(std::string("manifest: '") + what + "' must be a path or an object");
}

void init_logging() {
  auto logger = spdlog::get("lift-ddmin");
  if (!logger) logger = spdlog::stderr_color_mt("lift-ddmin");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("LIFT_DDMIN_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace

RunManifest manifest_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  RunManifest m;
  m.base_dir = base_dir;
  try {
    m.name = j.value("name", std::string("scenario"));
    m.building = j.at("building");
    m.fault = j.value("fault", nlohmann::json::object());
    m.oracle = j.at("oracle");
    m.trace = j.at("trace");
    if (j.contains("algorithm")) m.algorithm = j.at("algorithm").get<std::string>();
    if (j.contains("threshold")) m.threshold = j.at("threshold").get<double>();
    m.seed = j.value("seed", std::uint64_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  return m;
}

RunManifest load_manifest(const fs::path& path) {
  return manifest_from_json(read_json(path), path.parent_path());
}

Scenario resolve(const RunManifest& m) {
  Scenario s;
  s.name = m.name;
  const nlohmann::json building = section(m.building, m.base_dir, "building");
  const nlohmann::json fault = section(m.fault, m.base_dir, "fault");
  nlohmann::json oracle = section(m.oracle, m.base_dir, "oracle");
  if (m.threshold) oracle["threshold"] = *m.threshold;
  s.building = building_from_json(building);
  s.fault = fault_from_json(fault);
  s.fault.validate(s.building);
  s.oracle = oracle_from_json(oracle);

  nlohmann::json trace;
  if (m.trace.is_string() && fs::path(m.trace.get<std::string>()).extension() != ".json") {
    s.trace = load_test_input(resolve_path(m.base_dir, m.trace.get<std::string>()));
    trace = m.trace;
  } else {
    trace = section(m.trace, m.base_dir, "trace");
    s.trace = generate_trace(traffic_spec_from_json(trace), m.seed);
  }
  s.resolved = {{"name", m.name},         {"building", to_json(s.building)},
                {"fault", to_json(s.fault)}, {"oracle", to_json(s.oracle)},
                {"trace", trace},         {"seed", m.seed}};
  if (m.algorithm) s.resolved["algorithm"] = *m.algorithm;
  return s;
}

Scenario load_scenario(const fs::path& manifest_path) { return resolve(load_manifest(manifest_path)); }

namespace {

struct RunOptions {
  std::string manifest;
  std::string building, fault, trace, oracle;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--manifest", o.manifest, "Run manifest (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--building", o.building, "Building config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--fault", o.fault, "Fault config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--trace", o.trace, "Passenger CSV or traffic spec (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--oracle", o.oracle, "Oracle config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed for a generated trace");
  cmd->add_option("--out", o.out, "Output directory");
}

RunManifest manifest_for(const RunOptions& o) {
  RunManifest m;
  if (!o.manifest.empty()) {
    m = load_manifest(o.manifest);
  } else {
    if (o.building.empty() || o.oracle.empty() || o.trace.empty()) {
      throw ConfigError("either --manifest or all of --building, --oracle and --trace are required");
    }
    m.fault = nlohmann::json::object();
    m.name = fs::path(o.trace).stem().string();
  }
  const fs::path cwd = fs::current_path();
  auto override_path = [&](nlohmann::json& field, const std::string& value) {
    if (!value.empty()) field = fs::absolute(value).string();
  };
  override_path(m.building, o.building);
  override_path(m.fault, o.fault);
  override_path(m.trace, o.trace);
  override_path(m.oracle, o.oracle);
  if (o.threshold) m.threshold = o.threshold;
  if (o.seed) m.seed = *o.seed;
  if (o.manifest.empty()) m.base_dir = cwd;
  return m;
}

// Copies the resolved manifest, and a CSV trace it refers to, into `out`.
void write_manifest_copy(const Scenario& s, const fs::path& out, const std::string& file) {
  nlohmann::json m = s.resolved;
  if (m["trace"].is_string()) {
    const std::string csv = fs::path(file).stem().string() + ".trace.csv";
    save_test_input(s.trace, out / csv);
    m["trace"] = csv;
  }
  write_json(out / file, m);
}

int cmd_simulate(const RunOptions& o, bool stop_at_failure) {
  const Scenario s = resolve(manifest_for(o));
  const fs::path out(o.out);
  fs::create_directories(out);
  FailureMonitor monitor(s.oracle);
  ExecuteOptions opt;
  opt.monitor = stop_at_failure ? &monitor : nullptr;
  const SimOutcome outcome = execute_test(s.trace, s.building, s.fault, opt);
  const Verdict v = judge(outcome, s.oracle);

  auto csv = open_out(out / "outcome.csv");
  write_outcome_csv(outcome, csv);
  auto env = open_out(out / "env_log.jsonl");
  write_env_log_jsonl(outcome, env);
  write_json(out / "verdict.json", to_json(v));
  write_manifest_copy(s, out, "manifest.json");

  if (v.failed()) {
    std::cout << fmt::format("{}: fail, passenger {} at t={:.1f}\n", s.name,
                             *v.conflicting_passenger, *v.failing_time);
    return kFail;
  }
  std::cout << s.name << ": pass\n";
  return kPass;
}

int cmd_minimize(const RunOptions& o, const std::string& algorithm_flag, bool stop_at_failure,
                 std::optional<std::size_t> budget) {
  const RunManifest m = manifest_for(o);
  const std::string name = !algorithm_flag.empty() ? algorithm_flag : m.algorithm.value_or("");
  if (name.empty()) throw ConfigError("no algorithm given");
  const Algorithm algorithm = algorithm_from_string(name);
  const Scenario s = resolve(m);
  const fs::path out(o.out);
  fs::create_directories(out);

  ReductionContext ctx = make_context(s.trace, s.building, s.fault, s.oracle, budget);
  ctx.stop_at_failure = stop_at_failure;
  const ReductionResult r = reduce(ctx, algorithm);
  const TirrReport tirr = tirr_ft(ctx, r.final, r.checkpoint);

  save_test_input(r.final, out / "reduced.csv");
  write_json(out / "reduction.json", {{"scenario", s.name},
                                      {"initial_np", s.trace.np()},
                                      {"original_verdict", to_json(ctx.original_verdict)},
                                      {"oracle", to_json(ctx.oracle)},
                                      {"result", to_json(r)},
                                      {"tirr", to_json(tirr)}});
  nlohmann::json resolved = s.resolved;
  resolved["algorithm"] = name;
  Scenario copy = s;
  copy.resolved = resolved;
  write_manifest_copy(copy, out, "manifest.json");

  std::cout << fmt::format("{}, {} → {}, sims={}, tirr_ft={:.4f}\n", name, s.trace.np(),
                           r.final.np(), r.simulations_executed, tirr.tirr_ft);
  return kPass;
}

int cmd_compare(const std::vector<std::string>& manifests, const std::vector<std::string>& algos,
                std::vector<double> thresholds, std::size_t reps, const std::string& out_dir) {
  std::vector<Algorithm> algorithms;
  for (const auto& a : algos) algorithms.push_back(algorithm_from_string(a));
  if (algorithms.empty()) algorithms = all_algorithms();
  if (thresholds.empty()) thresholds = default_thresholds();

  const fs::path out(out_dir);
  fs::create_directories(out / "manifests");
  std::vector<NamedScenario> scenarios;
  std::set<std::string> names;
  for (const auto& path : manifests) {
    Scenario s = load_scenario(path);
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name '" + s.name + "'");
    write_manifest_copy(s, out / "manifests", s.name + ".json");
    OracleConfig oracle = s.oracle;
    oracle.threshold = 0;
    scenarios.push_back({s.name, make_context(s.trace, s.building, s.fault, oracle)});
  }

  const ComparisonTable table = run_comparison(scenarios, algorithms, thresholds, reps);
  auto csv = open_out(out / "comparison.csv");
  table.write_csv(csv);
  write_json(out / "comparison.json", table.to_json());
  std::cout << fmt::format("{} rows written to {}\n", table.rows.size(),
                           (out / "comparison.csv").string());
  return kPass;
}

int cmd_gen(const std::string& spec, std::uint64_t seed, const std::string& out) {
  const TestInput ti = generate_trace(load_traffic_spec(spec), seed);
  save_test_input(ti, out);
  std::cout << fmt::format("{} passengers written to {}\n", ti.np(), out);
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  init_logging();
  CLI::App app{"Failure-inducing passenger trace minimization for elevator dispatching",
               "lift-ddmin"};
  app.require_subcommand(1);

  RunOptions sim_opts;
  bool sim_stop = false;
  auto* simulate = app.add_subcommand("simulate", "Run a trace and judge it");
  add_run_options(simulate, sim_opts);
  simulate->add_option("--threshold", sim_opts.threshold, "Oracle threshold in percent");
  simulate->add_flag("--stop-at-failure,!--no-stop-at-failure", sim_stop,
                     "Halt the simulation at the first failure");

  RunOptions min_opts;
  std::string algorithm;
  bool min_stop = true;
  std::optional<std::size_t> budget;
  auto* minimize = app.add_subcommand("minimize", "Reduce a failure-inducing trace");
  add_run_options(minimize, min_opts);
  minimize->add_option("--threshold", min_opts.threshold, "Oracle threshold in percent");
  minimize->add_option("--algorithm", algorithm,
                       "backward, dd-time, dd-event, ewdd-time or ewdd-event");
  minimize->add_flag("--stop-at-failure,!--no-stop-at-failure", min_stop,
                     "Halt candidate runs at their first failure (default on)");
  minimize->add_option("--budget", budget, "Maximum number of simulations");

  std::vector<std::string> cmp_manifests, cmp_algos;
  std::vector<double> cmp_thresholds;
  std::size_t reps = 3;
  std::string cmp_out = "out";
  auto* compare = app.add_subcommand("compare", "Compare algorithms over scenarios and thresholds");
  compare->add_option("--manifest", cmp_manifests, "Scenario manifests")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--algorithm", cmp_algos, "Algorithms (default: all)");
  compare->add_option("--threshold", cmp_thresholds, "Thresholds in percent (default: ten levels)");
  compare->add_option("--reps", reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  compare->add_option("--out", cmp_out, "Output directory");

  std::string gen_spec, gen_out;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a passenger trace");
  gen->add_option("--spec", gen_spec, "Traffic spec (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opts, sim_stop);
    if (*minimize) return cmd_minimize(min_opts, algorithm, min_stop, budget);
    if (*compare) return cmd_compare(cmp_manifests, cmp_algos, cmp_thresholds, reps, cmp_out);
    if (*gen) return cmd_gen(gen_spec, gen_seed, gen_out);
  } catch (const NotFailureInducing& e) {
    std::cerr << "error: not failure-inducing: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace liftdd::cli
