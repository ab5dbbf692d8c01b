#pragma once

#include <filesystem>
#include <vector>

#include "liftdd/oracle.hpp"
#include "liftdd/sim.hpp"
#include "liftdd/trace.hpp"

namespace liftdd::testing {

inline std::filesystem::path data_dir() { return LIFTDD_TEST_DATA_DIR; }
inline std::filesystem::path scenario_dir() { return LIFTDD_SCENARIO_DIR; }

inline Passenger pax(int id, ArrivalTime at, int af, int df) {
  Passenger p;
  p.id = id;
  p.at = at;
  p.af = af;
  p.df = df;
  return p;
}

// The ten-passenger running example: 10 floors, default passenger attributes.
inline TestInput running_example() {
  return TestInput({pax(1, 11945, 1, 8), pax(2, 11985, 10, 4), pax(3, 12060, 3, 1),
                    pax(4, 12080, 3, 1), pax(5, 12115, 1, 8), pax(6, 12130, 4, 8),
                    pax(7, 12210, 3, 1), pax(8, 12365, 7, 4), pax(9, 12367, 7, 4),
                    pax(10, 12375, 7, 4)});
}

inline BuildingConfig building(int floors, int cars) {
  BuildingConfig b;
  b.floors = floors;
  b.cars.assign(static_cast<std::size_t>(cars), CarSpec{});
  return b;
}

inline FaultConfig fault(FaultKind kind, int car = 0) {
  FaultConfig f;
  f.kind = kind;
  f.car = car;
  return f;
}

inline OracleConfig wt_oracle(double limit, double threshold = 0) {
  OracleConfig cfg;
  cfg.requirements.push_back({Metric::max_waiting_time, limit});
  cfg.threshold = threshold;
  return cfg;
}

inline std::vector<int> ids(const TestInput& ti) { return ti.ids(); }

inline std::vector<int> id_range(int first, int last) {
  std::vector<int> out;
  for (int i = first; i <= last; ++i) out.push_back(i);
  return out;
}

}  // namespace liftdd::testing
