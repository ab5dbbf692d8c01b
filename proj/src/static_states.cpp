#include <algorithm>
#include <cmath>

#include "liftdd/sim.hpp"

namespace liftdd {

bool EnvState::is_static() const {
  if (pending_calls != 0) return false;
  return std::all_of(cars.begin(), cars.end(), [](const CarState& c) {
    return c.direction == Direction::idle && c.door == DoorState::closed && c.occupants == 0;
  });
}

std::vector<StaticState> detect_static_states(const SimOutcome& outcome, double until,
                                              ArrivalTime min_dwell) {
  std::vector<StaticState> found;
  const auto& log = outcome.env_log;
  std::size_t i = 0;
  while (i < log.size() && static_cast<double>(log[i].time) < until) {
    if (!log[i].is_static()) {
      ++i;
      continue;
    }
    // Idle cars sit on whole floors; the run ends where a car position changes.
    std::size_t j = i;
    while (j + 1 < log.size() && static_cast<double>(log[j + 1].time) < until &&
           log[j + 1].is_static() && log[j + 1].time == log[j].time + 1 &&
           log[j + 1].cars == log[i].cars) {
      ++j;
    }
    if (log[j].time - log[i].time >= min_dwell) {
      StaticState s;
      s.t_start = log[i].time;
      s.t_end = log[j].time;
      for (const auto& c : log[i].cars) s.car_positions.push_back(static_cast<int>(std::lround(c.position)));
      s.index = static_cast<int>(found.size()) + 1;
      found.push_back(std::move(s));
    }
    i = j + 1;
  }
  return found;
}

Checkpoint checkpoint_from(const StaticState& state) {
  return Checkpoint{state.t_end, state.car_positions};
}

}  // namespace liftdd
