#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftdd/oracle.hpp"
#include "liftdd/sim.hpp"
#include "liftdd/trace.hpp"

namespace liftdd::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kError = 2 };

// A manifest names the building, fault, oracle and trace of one run. Each of
// building, fault and oracle is either a path (relative to the manifest) or
// an inline object. The trace is a passenger CSV, or a traffic spec (path to
// a .json file or inline object) generated with `seed`.
struct RunManifest {
  std::string name;
  nlohmann::json building;
  nlohmann::json fault;
  nlohmann::json oracle;
  nlohmann::json trace;
  std::optional<std::string> algorithm;
  std::optional<double> threshold;
  std::uint64_t seed = 1;
  std::filesystem::path base_dir = ".";
};

RunManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

// A manifest with every file read and the trace materialized.
struct Scenario {
  std::string name;
  BuildingConfig building;
  FaultConfig fault;
  OracleConfig oracle;
  TestInput trace;
  // Self-contained manifest that reproduces this scenario.
  nlohmann::json resolved;
};

Scenario resolve(const RunManifest& m);
Scenario load_scenario(const std::filesystem::path& manifest_path);

// Entry point; args excludes the program name. Never throws.
int run(const std::vector<std::string>& args);

}  // namespace liftdd::cli
