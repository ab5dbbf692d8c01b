#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftdd/trace.hpp"

namespace liftdd {

// The kernel advances in fixed 0.1 s ticks so door and boarding durations
// accumulate exactly. Public times are seconds.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerSecond = 10;

inline double to_seconds(Ticks t) { return static_cast<double>(t) / kTicksPerSecond; }
Ticks to_ticks(double seconds);

// ---- installation ---------------------------------------------------------

struct CarSpec {
  double speed = 1.75;            // m/s
  double rated_capacity = 630.0;  // kg
  double door_open_time = 2.0;    // s
  double door_close_time = 2.5;   // s
  double door_dwell = 2.0;        // s, doors held open after the last transfer
  int home_floor = 1;

  bool operator==(const CarSpec&) const = default;
};

struct BuildingConfig {
  int floors = 10;
  std::vector<CarSpec> cars;
  double floor_height = 3.5;  // m

  // Throws ConfigError.
  void validate() const;
  bool operator==(const BuildingConfig&) const = default;
};

// A seeded dispatcher defect.
//   dead_car          the car never moves, yet keeps receiving assignments;
//                     a supervision timer hands its calls to another car
//                     after `reassign_after` seconds.
//   load_blind        full cars are not excluded from hall-call assignment.
//   parking_storm     cars that run out of work travel to `parking_floor`.
//   stale_assignment  the first car given a (floor, direction) call keeps
//                     every later call there. This is state carried across
//                     idle periods.
enum class FaultKind { none, dead_car, load_blind, parking_storm, stale_assignment };

std::string to_string(FaultKind kind);
FaultKind fault_kind_from_string(const std::string& name);

struct FaultConfig {
  FaultKind kind = FaultKind::none;
  int car = 0;                    // dead_car: 0-based car index
  double reassign_after = 180.0;  // dead_car: seconds
  int parking_floor = 1;          // parking_storm

  void validate(const BuildingConfig& building) const;
  // Faults whose dispatcher keeps no state across a fully idle system.
  bool memoryless() const noexcept { return kind != FaultKind::stale_assignment; }
  bool operator==(const FaultConfig&) const = default;
};

BuildingConfig building_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BuildingConfig& b);
BuildingConfig load_building(const std::filesystem::path& path);

FaultConfig fault_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FaultConfig& f);
FaultConfig load_fault(const std::filesystem::path& path);

// ---- outcomes -------------------------------------------------------------

struct PassengerOutcome {
  int passenger_id = 0;
  int elevator_used = 0;           // 1-based, as in simulator reports
  double t_elev_arrived = 0;       // doors open at af for this passenger
  double t_reached_destination = 0;
  double wt = 0;                   // t_elev_arrived - at
  double tt = 0;                   // t_reached_destination - t_elev_arrived

  bool operator==(const PassengerOutcome&) const = default;
};

// Boarded but not yet delivered when the run halted.
struct BoardedPassenger {
  int passenger_id = 0;
  int elevator_used = 0;
  double t_elev_arrived = 0;
  double wt = 0;

  bool operator==(const BoardedPassenger&) const = default;
};

enum class Direction { up, down, idle };
enum class DoorState { open, closed, moving };

struct CarState {
  double position = 1;  // floor, fractional while travelling
  Direction direction = Direction::idle;
  DoorState door = DoorState::closed;
  int occupants = 0;
  double load = 0;

  bool operator==(const CarState&) const = default;
};

struct EnvState {
  ArrivalTime time = 0;
  std::vector<CarState> cars;
  int pending_calls = 0;  // registered hall calls plus car calls

  // All cars stopped and empty with doors closed, nothing pending.
  bool is_static() const;
  bool operator==(const EnvState&) const = default;
};

enum class HaltReason { completed, stop_time, monitor };

struct SimOutcome {
  std::vector<PassengerOutcome> outcomes;  // delivered passengers, by id
  std::vector<BoardedPassenger> in_transit;
  std::vector<EnvState> env_log;           // one sample per simulated second
  double sim_start = 0;
  double sim_end = 0;
  double simulated_duration = 0;
  HaltReason halt = HaltReason::completed;

  bool operator==(const SimOutcome&) const = default;
};

// ---- checkpoints ----------------------------------------------------------

struct StaticState {
  ArrivalTime t_start = 0;
  ArrivalTime t_end = 0;
  std::vector<int> car_positions;
  int index = 0;  // 1-based, in time order

  bool operator==(const StaticState&) const = default;
};

struct Checkpoint {
  ArrivalTime start_time = 0;
  std::vector<int> car_positions;

  bool operator==(const Checkpoint&) const = default;
};

// Observer invoked while the simulation runs. Returning true halts the run at
// the end of the current tick.
class RunMonitor {
 public:
  virtual ~RunMonitor() = default;
  virtual bool on_boarded(const BoardedPassenger&) { return false; }
  virtual bool on_delivered(const PassengerOutcome&) { return false; }
};

struct ExecuteOptions {
  std::optional<Checkpoint> checkpoint;
  std::optional<double> stop_time;
  RunMonitor* monitor = nullptr;
  bool record_env_log = true;
};

// Pure function of its arguments. The clock starts at the first arrival.
// Cars start at the checkpoint positions if one is given, else at their home
// floors. A checkpoint whose environment is not at rest (or an empty input)
// starts the clock at the checkpoint time instead.
SimOutcome execute_test(const TestInput& ti, const BuildingConfig& building,
                        const FaultConfig& fault, const ExecuteOptions& options = {});

SimOutcome execute_test(const TestInput& ti, const BuildingConfig& building,
                        const FaultConfig& fault, const std::optional<Checkpoint>& checkpoint,
                        std::optional<double> stop_time = std::nullopt);

inline constexpr ArrivalTime kDefaultMinDwell = 5;

// Maximal runs of static samples strictly before `until` lasting at least
// `min_dwell` seconds.
std::vector<StaticState> detect_static_states(const SimOutcome& outcome, double until,
                                              ArrivalTime min_dwell = kDefaultMinDwell);

Checkpoint checkpoint_from(const StaticState& state);

// ---- export ---------------------------------------------------------------

inline constexpr const char* kOutcomeCsvHeader =
    "id,elevator_used,t_elev_arrived,t_reached_destination,wt,tt";

void write_outcome_csv(const SimOutcome& outcome, std::ostream& out);
void write_env_log_jsonl(const SimOutcome& outcome, std::ostream& out);
nlohmann::json to_json(const EnvState& state);
nlohmann::json to_json(const Checkpoint& cp);
nlohmann::json to_json(const StaticState& s);

std::string to_string(Direction d);
std::string to_string(DoorState d);

}  // namespace liftdd
