#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

#include "liftdd/errors.hpp"
#include "liftdd/sim.hpp"

namespace liftdd {

namespace {

// Mass and capacity factor the dispatcher assumes when judging whether a car
// can take one more passenger.
constexpr double kNominalMass = 75.0;
constexpr double kNominalCapacityFactor = 0.8;

// No delivery for this long while passengers are pending means the kernel is
// stuck. Reported as an error rather than looping forever.
constexpr Ticks kStallLimit = 24 * 3600 * kTicksPerSecond;

int dir_slot(int dir) { return dir > 0 ? 0 : 1; }
int slot_dir(int slot) { return slot == 0 ? 1 : -1; }

enum class Phase { idle, moving, opening, transfer, dwell, closing };

struct Rider {
  int pidx;
  Ticks elev_arrived;
};

struct Car {
  int index = 0;
  Ticks per_floor = 1;
  Ticks open_ticks = 1;
  Ticks close_ticks = 1;
  Ticks dwell_ticks = 1;
  double capacity = 0;
  bool dead = false;

  int floor = 1;      // current floor; the departure floor while moving
  int dir = 0;        // travel or serving direction, 0 when idle
  Phase phase = Phase::idle;
  Ticks phase_start = 0;
  Ticks phase_end = 0;
  Ticks doors_open_at = 0;
  bool parking = false;

  std::vector<Rider> riders;
  double load = 0;
  std::vector<char> car_calls;  // indexed by floor

  // Passenger whose exit is in progress, delivered when the phase ends.
  std::optional<Rider> exiting;
};

struct HallCall {
  std::deque<int> waiting;  // passenger indices, arrival order
  int assigned = -1;
  Ticks assigned_at = 0;
  int left_behind_by = -1;  // car that closed its doors on these passengers
  bool avoid_dead = false;  // dead-car supervision already fired
};

class Kernel {
 public:
  Kernel(const TestInput& ti, const BuildingConfig& building, const FaultConfig& fault,
         const ExecuteOptions& options)
      : ti_(ti), building_(building), fault_(fault), options_(options) {
    floors_ = building.floors;
    calls_.resize(static_cast<std::size_t>(floors_) + 1);
    sticky_.assign(static_cast<std::size_t>(floors_) + 1, {-1, -1});
    const double floor_h = building.floor_height;
    for (std::size_t i = 0; i < building.cars.size(); ++i) {
      const auto& spec = building.cars[i];
      Car car;
      car.index = static_cast<int>(i);
      car.per_floor = std::max<Ticks>(1, to_ticks(floor_h / spec.speed));
      car.open_ticks = std::max<Ticks>(1, to_ticks(spec.door_open_time));
      car.close_ticks = std::max<Ticks>(1, to_ticks(spec.door_close_time));
      car.dwell_ticks = std::max<Ticks>(1, to_ticks(spec.door_dwell));
      car.capacity = spec.rated_capacity;
      car.floor = spec.home_floor;
      car.car_calls.assign(static_cast<std::size_t>(floors_) + 1, 0);
      car.dead = fault.kind == FaultKind::dead_car && fault.car == car.index;
      cars_.push_back(std::move(car));
    }
    if (options.checkpoint) {
      for (std::size_t i = 0; i < cars_.size(); ++i) {
        cars_[i].floor = options.checkpoint->car_positions[i];
      }
    }
  }

  SimOutcome run();

 private:
  const Passenger& pax(int pidx) const { return ti_[static_cast<std::size_t>(pidx)]; }
  HallCall& call(int floor, int dir) {
    return calls_[static_cast<std::size_t>(floor)][static_cast<std::size_t>(dir_slot(dir))];
  }

  void arrive(int pidx);
  void supervise(Ticks t);
  void assign_pending(Ticks t);
  int choose_car(int floor, int dir, const HallCall& hc) const;
  bool eligible(const Car& car, int floor, const HallCall& hc) const;
  bool served_now(int floor, int dir) const;
  bool full_for_dispatch(const Car& car) const;
  Ticks estimate(const Car& car, int floor, int dir) const;

  bool has_hall_call(const Car& car, int floor, int dir) const;
  bool has_stop_at(const Car& car, int floor) const;
  bool stops_beyond(const Car& car, int floor, int dir) const;

  void step(Car& car, Ticks t);
  void decide(Car& car, Ticks t);
  void on_floor_reached(Car& car, Ticks t);
  void start_opening(Car& car, int serve_dir, Ticks t);
  void start_moving(Car& car, int dir, Ticks t);
  bool start_transfer(Car& car, Ticks t);
  bool can_board(const Car& car, const Passenger& p) const;
  bool boardable_waiting(const Car& car);
  void finish_exit(Car& car, Ticks t);
  void on_doors_closed(Car& car, Ticks t);
  void clear_if_empty(HallCall& hc);

  bool quiescent() const;
  void sample(Ticks t);
  CarState car_state(const Car& car, Ticks t) const;
  int pending_calls() const;

  const TestInput& ti_;
  const BuildingConfig& building_;
  const FaultConfig& fault_;
  const ExecuteOptions& options_;

  int floors_ = 0;
  std::vector<Car> cars_;
  std::vector<std::array<HallCall, 2>> calls_;
  std::vector<std::array<int, 2>> sticky_;  // stale_assignment memory

  std::size_t next_arrival_ = 0;
  std::size_t delivered_ = 0;
  Ticks last_progress_ = 0;
  bool halt_requested_ = false;

  std::vector<PassengerOutcome> outcomes_;
  std::vector<BoardedPassenger> boarded_;  // indexed by pidx, valid once boarded
  std::vector<char> is_boarded_;
  std::vector<EnvState> env_log_;
};

// ---- dispatcher -----------------------------------------------------------

void Kernel::arrive(int pidx) {
  const auto& p = pax(pidx);
  call(p.af, p.direction()).waiting.push_back(pidx);
}

void Kernel::supervise(Ticks t) {
  if (fault_.kind != FaultKind::dead_car) return;
  const Ticks timeout = to_ticks(fault_.reassign_after);
  for (int f = 1; f <= floors_; ++f) {
    for (auto& hc : calls_[static_cast<std::size_t>(f)]) {
      if (hc.assigned == fault_.car && t - hc.assigned_at >= timeout) {
        hc.assigned = -1;
        hc.avoid_dead = true;
      }
    }
  }
}

bool Kernel::served_now(int floor, int dir) const {
  return std::any_of(cars_.begin(), cars_.end(), [&](const Car& c) {
    return c.floor == floor && c.dir == dir &&
           (c.phase == Phase::opening || c.phase == Phase::transfer || c.phase == Phase::dwell);
  });
}

bool Kernel::full_for_dispatch(const Car& car) const {
  return car.load + kNominalMass > kNominalCapacityFactor * car.capacity;
}

bool Kernel::eligible(const Car& car, int floor, const HallCall& hc) const {
  if (hc.avoid_dead && car.dead) return false;
  // The car that just left passengers behind is not called back to the same
  // landing until it has departed.
  if (car.index == hc.left_behind_by && car.floor == floor && car.phase != Phase::moving) {
    return false;
  }
  return true;
}

int Kernel::choose_car(int floor, int dir, const HallCall& hc) const {
  if (fault_.kind == FaultKind::stale_assignment) {
    const int remembered = sticky_[static_cast<std::size_t>(floor)][dir_slot(dir)];
    if (remembered >= 0 && eligible(cars_[static_cast<std::size_t>(remembered)], floor, hc)) {
      return remembered;
    }
  }
  const bool load_aware = fault_.kind != FaultKind::load_blind;
  bool any_room = false;
  if (load_aware) {
    for (const auto& c : cars_) {
      if (eligible(c, floor, hc) && !full_for_dispatch(c)) any_room = true;
    }
  }
  int best = -1;
  Ticks best_eta = std::numeric_limits<Ticks>::max();
  for (const auto& c : cars_) {
    if (!eligible(c, floor, hc)) continue;
    if (load_aware && any_room && full_for_dispatch(c)) continue;
    const Ticks eta = estimate(c, floor, dir);
    if (eta < best_eta) {
      best_eta = eta;
      best = c.index;
    }
  }
  return best;
}

// Estimated ticks until `car` could open its doors at `floor` for a call in
// direction `dir`: remaining phase time, travel along the collective sweep,
// and a full door cycle for every stop already committed.
Ticks Kernel::estimate(const Car& car, int floor, int dir) const {
  const Ticks door_cycle = car.open_ticks + car.dwell_ticks + car.close_ticks;
  Ticks remaining = 0;
  int pos = car.floor;
  switch (car.phase) {
    case Phase::idle: break;
    case Phase::moving:
      pos = car.floor + car.dir;
      remaining = car.per_floor;
      break;
    case Phase::opening:
    case Phase::transfer:
    case Phase::dwell: remaining = car.dwell_ticks + car.close_ticks; break;
    case Phase::closing: remaining = car.close_ticks; break;
  }

  int committed = 0;
  int top = pos;
  int bottom = pos;
  for (int f = 1; f <= floors_; ++f) {
    if (!has_stop_at(car, f)) continue;
    ++committed;
    top = std::max(top, f);
    bottom = std::min(bottom, f);
  }

  int distance = 0;
  const int d = car.phase == Phase::idle ? 0 : car.dir;
  if (d == 0) {
    distance = std::abs(floor - pos);
  } else {
    // Mirror downward travel onto the upward case.
    const int p = d > 0 ? pos : -pos;
    const int f = d > 0 ? floor : -floor;
    const int hi = d > 0 ? top : -bottom;
    const int lo = d > 0 ? bottom : -top;
    const bool same_way = (dir == d);
    if (same_way && f >= p) {
      distance = f - p;
    } else if (!same_way) {
      const int turn = std::max(hi, f);
      distance = (turn - p) + (turn - f);
    } else {
      const int low = std::min(lo, f);
      distance = (hi - p) + (hi - low) + (f - low);
    }
  }
  return remaining + static_cast<Ticks>(distance) * car.per_floor + committed * door_cycle;
}

void Kernel::assign_pending(Ticks t) {
  for (int f = 1; f <= floors_; ++f) {
    for (int slot = 0; slot < 2; ++slot) {
      auto& hc = calls_[static_cast<std::size_t>(f)][static_cast<std::size_t>(slot)];
      if (hc.waiting.empty() || hc.assigned >= 0) continue;
      const int dir = slot_dir(slot);
      if (served_now(f, dir)) continue;
      const int c = choose_car(f, dir, hc);
      if (c < 0) continue;
      hc.assigned = c;
      hc.assigned_at = t;
      hc.left_behind_by = -1;
      auto& memory = sticky_[static_cast<std::size_t>(f)][static_cast<std::size_t>(slot)];
      if (fault_.kind == FaultKind::stale_assignment && memory < 0) memory = c;
    }
  }
}

void Kernel::clear_if_empty(HallCall& hc) {
  if (!hc.waiting.empty()) return;
  hc.assigned = -1;
  hc.left_behind_by = -1;
  hc.avoid_dead = false;
}

// ---- car state machine ----------------------------------------------------

bool Kernel::has_hall_call(const Car& car, int floor, int dir) const {
  return calls_[static_cast<std::size_t>(floor)][static_cast<std::size_t>(dir_slot(dir))]
             .assigned == car.index;
}

bool Kernel::has_stop_at(const Car& car, int floor) const {
  return car.car_calls[static_cast<std::size_t>(floor)] != 0 || has_hall_call(car, floor, 1) ||
         has_hall_call(car, floor, -1);
}

bool Kernel::stops_beyond(const Car& car, int floor, int dir) const {
  for (int f = floor + dir; f >= 1 && f <= floors_; f += dir) {
    if (has_stop_at(car, f)) return true;
  }
  return false;
}

void Kernel::start_opening(Car& car, int serve_dir, Ticks t) {
  car.dir = serve_dir;
  car.phase = Phase::opening;
  car.phase_start = t;
  car.phase_end = t + car.open_ticks;
  car.car_calls[static_cast<std::size_t>(car.floor)] = 0;
}

void Kernel::start_moving(Car& car, int dir, Ticks t) {
  car.dir = dir;
  car.phase = Phase::moving;
  car.phase_start = t;
  car.phase_end = t + car.per_floor;
}

void Kernel::decide(Car& car, Ticks t) {
  car.phase = Phase::idle;
  if (car.dead) return;
  const int f = car.floor;
  if (car.parking && f == fault_.parking_floor) car.parking = false;

  const bool up_here = has_hall_call(car, f, 1);
  const bool down_here = has_hall_call(car, f, -1);
  if (up_here || down_here) {
    int serve = up_here ? 1 : -1;
    if (car.dir != 0 && has_hall_call(car, f, car.dir)) {
      serve = car.dir;
    } else if (car.dir != 0 && stops_beyond(car, f, car.dir)) {
      // Finish the sweep before answering the opposite call here.
      start_moving(car, car.dir, t);
      return;
    }
    car.parking = false;
    start_opening(car, serve, t);
    return;
  }

  const bool above = stops_beyond(car, f, 1);
  const bool below = stops_beyond(car, f, -1);
  int next = 0;
  if (car.dir > 0 && above) next = 1;
  else if (car.dir < 0 && below) next = -1;
  else if (above) next = 1;
  else if (below) next = -1;

  if (next != 0) {
    car.parking = false;
    start_moving(car, next, t);
    return;
  }
  car.dir = 0;
  if (fault_.kind == FaultKind::parking_storm && f != fault_.parking_floor) {
    car.parking = true;
    start_moving(car, fault_.parking_floor > f ? 1 : -1, t);
  }
}

void Kernel::on_floor_reached(Car& car, Ticks t) {
  car.floor += car.dir;
  const int f = car.floor;
  const int d = car.dir;
  const bool beyond = stops_beyond(car, f, d);
  const bool car_call = car.car_calls[static_cast<std::size_t>(f)] != 0;
  const bool same = has_hall_call(car, f, d);
  const bool opposite = has_hall_call(car, f, -d);

  if (car_call || same || (opposite && !beyond)) {
    car.parking = false;
    const int serve = (same || beyond || !opposite) ? d : -d;
    start_opening(car, serve, t);
    return;
  }
  if (beyond) {
    car.parking = false;
    start_moving(car, d, t);
    return;
  }
  const bool committed_elsewhere = stops_beyond(car, f, -d);
  if (car.parking && !committed_elsewhere && f != fault_.parking_floor) {
    start_moving(car, d, t);
    return;
  }
  // Nothing ahead: stop here and pick the next job from rest.
  decide(car, t);
}

bool Kernel::can_board(const Car& car, const Passenger& p) const {
  return car.load + p.m <= p.cf / 100.0 * car.capacity;
}

bool Kernel::boardable_waiting(const Car& car) {
  const auto& hc = call(car.floor, car.dir);
  return std::any_of(hc.waiting.begin(), hc.waiting.end(),
                     [&](int pidx) { return can_board(car, pax(pidx)); });
}

// Starts the next exit or boarding; false when nothing is left to transfer.
bool Kernel::start_transfer(Car& car, Ticks t) {
  auto exit_it = std::find_if(car.riders.begin(), car.riders.end(),
                              [&](const Rider& r) { return pax(r.pidx).df == car.floor; });
  if (exit_it != car.riders.end()) {
    const Rider r = *exit_it;
    car.riders.erase(exit_it);
    car.load -= pax(r.pidx).m;
    car.exiting = r;
    car.phase = Phase::transfer;
    car.phase_start = t;
    car.phase_end = t + std::max<Ticks>(1, to_ticks(pax(r.pidx).ext));
    return true;
  }

  auto& hc = call(car.floor, car.dir);
  auto board_it = std::find_if(hc.waiting.begin(), hc.waiting.end(),
                               [&](int pidx) { return can_board(car, pax(pidx)); });
  if (board_it == hc.waiting.end()) return false;

  const int pidx = *board_it;
  hc.waiting.erase(board_it);
  clear_if_empty(hc);
  const auto& p = pax(pidx);
  const Ticks arrived = std::max(car.doors_open_at, p.at * kTicksPerSecond);
  car.riders.push_back({pidx, arrived});
  car.load += p.m;
  car.car_calls[static_cast<std::size_t>(p.df)] = 1;
  car.phase = Phase::transfer;
  car.phase_start = t;
  car.phase_end = t + std::max<Ticks>(1, to_ticks(p.ent));

  BoardedPassenger b{p.id, car.index + 1, to_seconds(arrived),
                     to_seconds(arrived - p.at * kTicksPerSecond)};
  boarded_[static_cast<std::size_t>(pidx)] = b;
  is_boarded_[static_cast<std::size_t>(pidx)] = 1;
  if (options_.monitor && options_.monitor->on_boarded(b)) halt_requested_ = true;
  return true;
}

void Kernel::finish_exit(Car& car, Ticks t) {
  if (!car.exiting) return;
  const Rider r = *car.exiting;
  car.exiting.reset();
  const auto& p = pax(r.pidx);
  PassengerOutcome o;
  o.passenger_id = p.id;
  o.elevator_used = car.index + 1;
  o.t_elev_arrived = to_seconds(r.elev_arrived);
  o.t_reached_destination = to_seconds(t);
  o.wt = to_seconds(r.elev_arrived - p.at * kTicksPerSecond);
  o.tt = to_seconds(t - r.elev_arrived);
  outcomes_.push_back(o);
  is_boarded_[static_cast<std::size_t>(r.pidx)] = 0;
  ++delivered_;
  last_progress_ = t;
  if (options_.monitor && options_.monitor->on_delivered(o)) halt_requested_ = true;
}

void Kernel::on_doors_closed(Car& car, Ticks t) {
  auto& hc = call(car.floor, car.dir);
  if (!hc.waiting.empty() && (hc.assigned < 0 || hc.assigned == car.index)) {
    // Left behind by a full car: the call is registered again.
    hc.assigned = -1;
    hc.left_behind_by = car.index;
  }
  decide(car, t);
}

void Kernel::step(Car& car, Ticks t) {
  if (car.dead) return;
  // Several zero-wait transitions may chain within one tick.
  for (int guard = 0; guard < 64; ++guard) {
    switch (car.phase) {
      case Phase::idle:
        decide(car, t);
        if (car.phase == Phase::idle || car.phase_end > t) return;
        break;
      case Phase::moving:
        if (t < car.phase_end) return;
        on_floor_reached(car, t);
        if (car.phase == Phase::idle || car.phase_end > t) return;
        break;
      case Phase::opening:
        if (t < car.phase_end) return;
        car.doors_open_at = t;
        if (!start_transfer(car, t)) {
          car.phase = Phase::dwell;
          car.phase_start = t;
          car.phase_end = t + car.dwell_ticks;
        }
        return;
      case Phase::transfer:
        if (t < car.phase_end) return;
        finish_exit(car, t);
        if (!start_transfer(car, t)) {
          car.phase = Phase::dwell;
          car.phase_start = t;
          car.phase_end = t + car.dwell_ticks;
        }
        return;
      case Phase::dwell:
        if (boardable_waiting(car)) {
          start_transfer(car, t);
          return;
        }
        if (t < car.phase_end) return;
        car.phase = Phase::closing;
        car.phase_start = t;
        car.phase_end = t + car.close_ticks;
        return;
      case Phase::closing:
        if (t < car.phase_end) return;
        on_doors_closed(car, t);
        if (car.phase == Phase::idle || car.phase_end > t) return;
        break;
    }
  }
  throw Error("simulator: car state machine did not settle");
}

// ---- sampling -------------------------------------------------------------

CarState Kernel::car_state(const Car& car, Ticks t) const {
  CarState s;
  s.position = car.floor;
  s.occupants = static_cast<int>(car.riders.size()) + (car.exiting ? 1 : 0);
  s.load = car.load + (car.exiting ? pax(car.exiting->pidx).m : 0.0);
  switch (car.phase) {
    case Phase::idle: s.direction = Direction::idle; s.door = DoorState::closed; return s;
    case Phase::moving:
      s.position = car.floor + car.dir * static_cast<double>(t - car.phase_start) /
                                   static_cast<double>(car.per_floor);
      s.door = DoorState::closed;
      break;
    case Phase::opening:
    case Phase::closing: s.door = DoorState::moving; break;
    case Phase::transfer:
    case Phase::dwell: s.door = DoorState::open; break;
  }
  s.direction = car.dir > 0 ? Direction::up : car.dir < 0 ? Direction::down : Direction::idle;
  return s;
}

int Kernel::pending_calls() const {
  int n = 0;
  for (int f = 1; f <= floors_; ++f) {
    for (const auto& hc : calls_[static_cast<std::size_t>(f)]) n += hc.waiting.empty() ? 0 : 1;
  }
  for (const auto& car : cars_) {
    n += static_cast<int>(std::count(car.car_calls.begin(), car.car_calls.end(), 1));
  }
  return n;
}

void Kernel::sample(Ticks t) {
  EnvState s;
  s.time = t / kTicksPerSecond;
  s.cars.reserve(cars_.size());
  for (const auto& car : cars_) s.cars.push_back(car_state(car, t));
  s.pending_calls = pending_calls();
  env_log_.push_back(std::move(s));
}

bool Kernel::quiescent() const {
  for (const auto& car : cars_) {
    if (car.phase != Phase::idle || !car.riders.empty() || car.exiting) return false;
    if (!car.dead && fault_.kind == FaultKind::parking_storm && car.floor != fault_.parking_floor) {
      return false;
    }
  }
  return pending_calls() == 0;
}

// ---- main loop ------------------------------------------------------------

SimOutcome Kernel::run() {
  const std::size_t n = ti_.np();
  boarded_.resize(n);
  is_boarded_.assign(n, 0);

  // A checkpointed environment is at rest until its first arrival, unless a
  // parking fault still has cars to move, so the clock starts there.
  Ticks t = 0;
  if (n > 0) t = ti_.front().at * kTicksPerSecond;
  if (options_.checkpoint && (n == 0 || !quiescent())) {
    t = options_.checkpoint->start_time * kTicksPerSecond;
  }
  const Ticks start = t;
  std::optional<Ticks> stop;
  if (options_.stop_time) {
    stop = to_ticks(*options_.stop_time);
    if (*stop < start) throw ValidationError("stop_time precedes the simulation start");
  }
  last_progress_ = start;
  HaltReason reason = HaltReason::completed;

  auto arrival_tick = [&](std::size_t i) { return ti_[i].at * kTicksPerSecond; };

  while (true) {
    while (next_arrival_ < n && arrival_tick(next_arrival_) <= t) {
      arrive(static_cast<int>(next_arrival_));
      ++next_arrival_;
    }
    supervise(t);
    assign_pending(t);
    for (auto& car : cars_) step(car, t);

    const bool whole_second = t % kTicksPerSecond == 0;
    if (options_.record_env_log && whole_second) sample(t);

    if (halt_requested_) {
      reason = HaltReason::monitor;
      break;
    }
    if (stop && t >= *stop) {
      reason = HaltReason::stop_time;
      break;
    }
    const bool all_done = next_arrival_ == n && delivered_ == n;
    if (all_done && !stop && whole_second) break;
    if (!all_done && t - last_progress_ > kStallLimit) {
      throw Error("simulator: no passenger delivered for 24 simulated hours");
    }

    // Skip idle stretches straight to the next arrival.
    const bool idle_system = quiescent();
    if (idle_system) last_progress_ = t;
    if (idle_system && (next_arrival_ < n || stop)) {
      Ticks target = next_arrival_ < n ? arrival_tick(next_arrival_) : *stop;
      if (stop) target = std::min(target, *stop);
      if (target > t + 1) {
        if (options_.record_env_log) {
          for (Ticks s = (t / kTicksPerSecond + 1) * kTicksPerSecond; s < target;
               s += kTicksPerSecond) {
            sample(s);
          }
        }
        t = target;
        continue;
      }
    }
    ++t;
  }

  SimOutcome out;
  std::sort(outcomes_.begin(), outcomes_.end(),
            [](const auto& a, const auto& b) { return a.passenger_id < b.passenger_id; });
  out.outcomes = std::move(outcomes_);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_boarded_[i]) out.in_transit.push_back(boarded_[i]);
  }
  std::sort(out.in_transit.begin(), out.in_transit.end(),
            [](const auto& a, const auto& b) { return a.passenger_id < b.passenger_id; });
  out.env_log = std::move(env_log_);
  out.sim_start = to_seconds(start);
  out.sim_end = to_seconds(t);
  out.simulated_duration = out.sim_end - out.sim_start;
  out.halt = reason;
  return out;
}

}  // namespace

SimOutcome execute_test(const TestInput& ti, const BuildingConfig& building,
                        const FaultConfig& fault, const ExecuteOptions& options) {
  building.validate();
  fault.validate(building);
  for (const auto& p : ti) {
    if (p.af > building.floors || p.df > building.floors) {
      throw ValidationError("passenger " + std::to_string(p.id) + ": floor outside the building");
    }
  }
  if (ti.empty() && !options.stop_time) {
    throw ValidationError("an empty test input needs a stop_time");
  }
  if (const auto& cp = options.checkpoint) {
    if (cp->car_positions.size() != building.cars.size()) {
      throw ValidationError("checkpoint has " + std::to_string(cp->car_positions.size()) +
                            " car positions for " + std::to_string(building.cars.size()) +
                            " cars");
    }
    for (int pos : cp->car_positions) {
      if (pos < 1 || pos > building.floors) {
        throw ValidationError("checkpoint car position outside the building");
      }
    }
    if (!ti.empty() && ti.front().at < cp->start_time) {
      throw ValidationError("passenger " + std::to_string(ti.front().id) +
                            " arrives before the checkpoint");
    }
  }
  Kernel kernel(ti, building, fault, options);
  return kernel.run();
}

SimOutcome execute_test(const TestInput& ti, const BuildingConfig& building,
                        const FaultConfig& fault, const std::optional<Checkpoint>& checkpoint,
                        std::optional<double> stop_time) {
  ExecuteOptions options;
  options.checkpoint = checkpoint;
  options.stop_time = stop_time;
  return execute_test(ti, building, fault, options);
}

}  // namespace liftdd
