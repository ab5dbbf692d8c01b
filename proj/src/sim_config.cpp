#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "liftdd/errors.hpp"
#include "liftdd/sim.hpp"

namespace liftdd {

Ticks to_ticks(double seconds) {
  return static_cast<Ticks>(std::llround(seconds * static_cast<double>(kTicksPerSecond)));
}

void BuildingConfig::validate() const {
  if (floors < 2) throw ConfigError("a building needs at least 2 floors");
  if (cars.empty()) throw ConfigError("a building needs at least one car");
  if (!(floor_height > 0)) throw ConfigError("floor_height must be positive");
  for (std::size_t i = 0; i < cars.size(); ++i) {
    const auto& c = cars[i];
    const auto name = "car " + std::to_string(i) + ": ";
    if (!(c.speed > 0) || !(c.rated_capacity > 0) || !(c.door_open_time > 0) ||
        !(c.door_close_time > 0) || !(c.door_dwell > 0)) {
      throw ConfigError(name + "speed, capacity and door times must be positive");
    }
    if (c.home_floor < 1 || c.home_floor > floors) {
      throw ConfigError(name + "home floor outside the building");
    }
  }
}

std::string to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::none: return "none";
    case FaultKind::dead_car: return "dead_car";
    case FaultKind::load_blind: return "load_blind";
    case FaultKind::parking_storm: return "parking_storm";
    case FaultKind::stale_assignment: return "stale_assignment";
  }
  return "?";
}

FaultKind fault_kind_from_string(const std::string& name) {
  for (auto k : {FaultKind::none, FaultKind::dead_car, FaultKind::load_blind,
                 FaultKind::parking_storm, FaultKind::stale_assignment}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown fault kind '" + name + "'");
}

void FaultConfig::validate(const BuildingConfig& building) const {
  const int ncars = static_cast<int>(building.cars.size());
  if (kind == FaultKind::dead_car) {
    if (car < 0 || car >= ncars) throw ConfigError("dead_car: car index out of range");
    if (ncars < 2) throw ConfigError("dead_car needs at least one other working car");
    if (!(reassign_after > 0)) throw ConfigError("dead_car: reassign_after must be positive");
  }
  if (kind == FaultKind::parking_storm &&
      (parking_floor < 1 || parking_floor > building.floors)) {
    throw ConfigError("parking_storm: parking floor outside the building");
  }
}

// ---- JSON -----------------------------------------------------------------

namespace {

template <typename F>
auto wrap_json(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace

BuildingConfig building_from_json(const nlohmann::json& j) {
  auto b = wrap_json("building", [&] {
    BuildingConfig out;
    out.floors = j.at("floors").get<int>();
    out.floor_height = j.value("floor_height", out.floor_height);
    const CarSpec defaults;
    for (const auto& c : j.at("cars")) {
      CarSpec car;
      car.speed = c.value("speed", defaults.speed);
      car.rated_capacity = c.value("rated_capacity", defaults.rated_capacity);
      car.door_open_time = c.value("door_open_time", defaults.door_open_time);
      car.door_close_time = c.value("door_close_time", defaults.door_close_time);
      car.door_dwell = c.value("door_dwell", defaults.door_dwell);
      car.home_floor = c.value("home_floor", defaults.home_floor);
      out.cars.push_back(car);
    }
    return out;
  });
  b.validate();
  return b;
}

nlohmann::json to_json(const BuildingConfig& b) {
  nlohmann::json cars = nlohmann::json::array();
  for (const auto& c : b.cars) {
    cars.push_back({{"speed", c.speed},
                    {"rated_capacity", c.rated_capacity},
                    {"door_open_time", c.door_open_time},
                    {"door_close_time", c.door_close_time},
                    {"door_dwell", c.door_dwell},
                    {"home_floor", c.home_floor}});
  }
  return {{"floors", b.floors}, {"floor_height", b.floor_height}, {"cars", cars}};
}

BuildingConfig load_building(const std::filesystem::path& path) {
  return building_from_json(read_json_file(path));
}

FaultConfig fault_from_json(const nlohmann::json& j) {
  return wrap_json("fault", [&] {
    FaultConfig f;
    f.kind = fault_kind_from_string(j.value("kind", std::string("none")));
    f.car = j.value("car", f.car);
    f.reassign_after = j.value("reassign_after", f.reassign_after);
    f.parking_floor = j.value("parking_floor", f.parking_floor);
    return f;
  });
}

nlohmann::json to_json(const FaultConfig& f) {
  nlohmann::json j = {{"kind", to_string(f.kind)}};
  if (f.kind == FaultKind::dead_car) {
    j["car"] = f.car;
    j["reassign_after"] = f.reassign_after;
  }
  if (f.kind == FaultKind::parking_storm) j["parking_floor"] = f.parking_floor;
  return j;
}

FaultConfig load_fault(const std::filesystem::path& path) {
  return fault_from_json(read_json_file(path));
}

// ---- export ---------------------------------------------------------------

std::string to_string(Direction d) {
  switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::idle: return "idle";
  }
  return "?";
}

std::string to_string(DoorState d) {
  switch (d) {
    case DoorState::open: return "open";
    case DoorState::closed: return "closed";
    case DoorState::moving: return "moving";
  }
  return "?";
}

namespace {

// Kernel times are whole ticks, so one decimal is exact.
void put_tenths(std::ostream& out, double seconds) {
  const auto ticks = to_ticks(seconds);
  out << ticks / kTicksPerSecond << '.' << std::llabs(ticks % kTicksPerSecond);
}

}  // namespace

void write_outcome_csv(const SimOutcome& outcome, std::ostream& out) {
  out << kOutcomeCsvHeader << '\n';
  for (const auto& o : outcome.outcomes) {
    out << o.passenger_id << ',' << o.elevator_used << ',';
    put_tenths(out, o.t_elev_arrived);
    out << ',';
    put_tenths(out, o.t_reached_destination);
    out << ',';
    put_tenths(out, o.wt);
    out << ',';
    put_tenths(out, o.tt);
    out << '\n';
  }
}

nlohmann::json to_json(const EnvState& state) {
  nlohmann::json cars = nlohmann::json::array();
  for (const auto& c : state.cars) {
    cars.push_back({{"position", c.position},
                    {"direction", to_string(c.direction)},
                    {"door", to_string(c.door)},
                    {"occupants", c.occupants},
                    {"load", c.load}});
  }
  return {{"time", state.time}, {"cars", cars}, {"pending_calls", state.pending_calls}};
}

void write_env_log_jsonl(const SimOutcome& outcome, std::ostream& out) {
  for (const auto& s : outcome.env_log) out << to_json(s).dump() << '\n';
}

nlohmann::json to_json(const Checkpoint& cp) {
  return {{"start_time", cp.start_time}, {"car_positions", cp.car_positions}};
}

nlohmann::json to_json(const StaticState& s) {
  return {{"index", s.index},
          {"t_start", s.t_start},
          {"t_end", s.t_end},
          {"car_positions", s.car_positions}};
}

}  // namespace liftdd
