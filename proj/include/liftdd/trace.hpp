#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace liftdd {

// Whole seconds since midnight, the resolution of passenger arrival times.
using ArrivalTime = std::int64_t;

// One passenger of a test input. Field names follow the traffic-file columns.
struct Passenger {
  int id = 0;                     // 1-based, position in arrival order
  ArrivalTime at = 0;             // arrival time at the hall
  int af = 1;                     // arrival floor
  int df = 2;                     // destination floor
  double m = 75.0;                // mass, kg
  double cf = 80.0;               // % of rated load at which the car looks full
  double ent = 1.2;               // seconds to enter a car
  double ext = 1.2;               // seconds to exit a car

  int direction() const noexcept { return df > af ? 1 : -1; }

  bool operator==(const Passenger&) const = default;
};

// Throws ValidationError naming the passenger id when an invariant fails.
void validate(const Passenger& p);

// Arrival-ordered passenger trace. Sorted by (at, id); ids are unique.
class TestInput {
 public:
  TestInput() = default;
  explicit TestInput(std::vector<Passenger> passengers);

  const std::vector<Passenger>& passengers() const noexcept { return passengers_; }
  std::size_t np() const noexcept { return passengers_.size(); }
  bool empty() const noexcept { return passengers_.empty(); }
  const Passenger& operator[](std::size_t i) const { return passengers_[i]; }
  const Passenger& front() const { return passengers_.front(); }
  const Passenger& back() const { return passengers_.back(); }
  auto begin() const noexcept { return passengers_.begin(); }
  auto end() const noexcept { return passengers_.end(); }

  // True when the constructor had to reorder the given passengers.
  bool was_resorted() const noexcept { return resorted_; }

  std::vector<int> ids() const;

  // Passengers from position `first` (0-based) to the end.
  TestInput suffix(std::size_t first) const;
  TestInput filter(const std::function<bool(const Passenger&)>& keep) const;

  // Equality is on the passenger sequence only.
  bool operator==(const TestInput& other) const { return passengers_ == other.passengers_; }

 private:
  std::vector<Passenger> passengers_;
  bool resorted_ = false;
};

// ---- passenger CSV --------------------------------------------------------

inline constexpr const char* kPassengerCsvHeader = "id,at,af,df,m,cf,ent,ext";

// "3:19:05" style rendering of an arrival time.
std::string clock_string(ArrivalTime seconds);

TestInput parse_test_input(std::istream& in);
void write_test_input(const TestInput& ti, std::ostream& out);

TestInput load_test_input(const std::filesystem::path& path);
void save_test_input(const TestInput& ti, const std::filesystem::path& path);

// ---- synthetic traffic ----------------------------------------------------

enum class TrafficProfile { uniform, lunch_peak, up_peak };

std::string to_string(TrafficProfile profile);
TrafficProfile traffic_profile_from_string(const std::string& name);

struct TrafficPhase {
  ArrivalTime start = 0;
  ArrivalTime end = 3600;  // arrivals fall in [start, end)
  int passengers = 0;
  TrafficProfile profile = TrafficProfile::uniform;
};

// Traffic is a sequence of phases; a single-phase spec is the common case.
struct TrafficSpec {
  int floors = 10;
  std::vector<TrafficPhase> phases;
  double m = 75.0;
  double cf = 80.0;
  double ent = 1.2;
  double ext = 1.2;
};

TrafficSpec traffic_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrafficSpec& spec);
TrafficSpec load_traffic_spec(const std::filesystem::path& path);

// Deterministic for a fixed (spec, seed).
TestInput generate_trace(const TrafficSpec& spec, std::uint64_t seed);

}  // namespace liftdd
