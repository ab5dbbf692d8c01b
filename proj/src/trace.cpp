#include "liftdd/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "liftdd/errors.hpp"

namespace liftdd {

void validate(const Passenger& p) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("passenger " + std::to_string(p.id) + ": " + why);
  };
  if (p.id < 1) fail("id must be positive");
  if (p.at < 0) fail("arrival time must be non-negative");
  if (p.af < 1 || p.df < 1) fail("floors are numbered from 1");
  if (p.af == p.df) fail("arrival and destination floor are equal");
  if (!(p.m > 0)) fail("mass must be positive");
  if (!(p.cf > 0 && p.cf <= 100)) fail("capacity factor must be in (0,100]");
  if (!(p.ent > 0)) fail("entering time must be positive");
  if (!(p.ext > 0)) fail("exiting time must be positive");
}

namespace {

bool arrival_less(const Passenger& a, const Passenger& b) {
  return std::tie(a.at, a.id) < std::tie(b.at, b.id);
}

}  // namespace

TestInput::TestInput(std::vector<Passenger> passengers) : passengers_(std::move(passengers)) {
  std::unordered_set<int> seen;
  seen.reserve(passengers_.size());
  for (const auto& p : passengers_) {
    validate(p);
    if (!seen.insert(p.id).second) {
      throw ValidationError("passenger " + std::to_string(p.id) + ": duplicate id");
    }
  }
  if (!std::is_sorted(passengers_.begin(), passengers_.end(), arrival_less)) {
    std::sort(passengers_.begin(), passengers_.end(), arrival_less);
    resorted_ = true;
  }
}

std::vector<int> TestInput::ids() const {
  std::vector<int> out;
  out.reserve(passengers_.size());
  for (const auto& p : passengers_) out.push_back(p.id);
  return out;
}

TestInput TestInput::suffix(std::size_t first) const {
  TestInput out;
  if (first < passengers_.size()) {
    out.passengers_.assign(passengers_.begin() + static_cast<std::ptrdiff_t>(first),
                           passengers_.end());
  }
  return out;
}

TestInput TestInput::filter(const std::function<bool(const Passenger&)>& keep) const {
  TestInput out;
  std::copy_if(passengers_.begin(), passengers_.end(), std::back_inserter(out.passengers_), keep);
  return out;
}

// ---- CSV ------------------------------------------------------------------

std::string clock_string(ArrivalTime seconds) {
  const auto h = seconds / 3600;
  const auto m = (seconds % 3600) / 60;
  const auto s = seconds % 60;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", static_cast<long long>(h),
                static_cast<long long>(m), static_cast<long long>(s));
  return buf;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view text, const char* column, std::size_t line) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError("bad value '" + std::string(text) + "' in column " + column, line);
  }
  return value;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

TestInput parse_test_input(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string_view header(kPassengerCsvHeader);
  // A trailing derived clock column is accepted and ignored.
  if (line != header && line != std::string(header) + ",clock") {
    throw ParseError("expected header '" + std::string(header) + "'", line_no);
  }
  const std::size_t columns = line == header ? 8 : 9;

  std::vector<Passenger> passengers;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(f.size()),
                       line_no);
    }
    Passenger p;
    p.id = parse_number<int>(f[0], "id", line_no);
    p.at = parse_number<ArrivalTime>(f[1], "at", line_no);
    p.af = parse_number<int>(f[2], "af", line_no);
    p.df = parse_number<int>(f[3], "df", line_no);
    p.m = parse_number<double>(f[4], "m", line_no);
    p.cf = parse_number<double>(f[5], "cf", line_no);
    p.ent = parse_number<double>(f[6], "ent", line_no);
    p.ext = parse_number<double>(f[7], "ext", line_no);
    passengers.push_back(p);
  }
  return TestInput(std::move(passengers));
}

void write_test_input(const TestInput& ti, std::ostream& out) {
  out << kPassengerCsvHeader << ",clock\n";
  for (const auto& p : ti) {
    out << p.id << ',' << p.at << ',' << p.af << ',' << p.df << ',' << format_real(p.m) << ','
        << format_real(p.cf) << ',' << format_real(p.ent) << ',' << format_real(p.ext) << ','
        << clock_string(p.at) << '\n';
  }
}

TestInput load_test_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open passenger file: " + path.string());
  return parse_test_input(in);
}

void save_test_input(const TestInput& ti, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write passenger file: " + path.string());
  write_test_input(ti, out);
  if (!out) throw IoError("write failed: " + path.string());
}

// ---- traffic generation ---------------------------------------------------

std::string to_string(TrafficProfile profile) {
  switch (profile) {
    case TrafficProfile::uniform: return "uniform";
    case TrafficProfile::lunch_peak: return "lunch-peak";
    case TrafficProfile::up_peak: return "up-peak";
  }
  return "?";
}

TrafficProfile traffic_profile_from_string(const std::string& name) {
  if (name == "uniform") return TrafficProfile::uniform;
  if (name == "lunch-peak" || name == "lunch_peak") return TrafficProfile::lunch_peak;
  if (name == "up-peak" || name == "up_peak") return TrafficProfile::up_peak;
  throw ConfigError("unknown traffic profile '" + name + "'");
}

namespace {

TrafficPhase phase_from_json(const nlohmann::json& j) {
  TrafficPhase ph;
  const auto& window = j.at("window");
  if (!window.is_array() || window.size() != 2) throw ConfigError("window must be [start, end]");
  ph.start = window[0].get<ArrivalTime>();
  ph.end = window[1].get<ArrivalTime>();
  ph.passengers = j.at("passengers").get<int>();
  ph.profile = traffic_profile_from_string(j.value("profile", std::string("uniform")));
  return ph;
}

}  // namespace

TrafficSpec traffic_spec_from_json(const nlohmann::json& j) {
  try {
    TrafficSpec spec;
    spec.floors = j.at("floors").get<int>();
    if (j.contains("phases")) {
      for (const auto& ph : j.at("phases")) spec.phases.push_back(phase_from_json(ph));
    } else {
      spec.phases.push_back(phase_from_json(j));
    }
    spec.m = j.value("m", spec.m);
    spec.cf = j.value("cf", spec.cf);
    spec.ent = j.value("ent", spec.ent);
    spec.ext = j.value("ext", spec.ext);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("traffic spec: ") + e.what());
  }
}

nlohmann::json to_json(const TrafficSpec& spec) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& ph : spec.phases) {
    phases.push_back({{"window", {ph.start, ph.end}},
                      {"passengers", ph.passengers},
                      {"profile", to_string(ph.profile)}});
  }
  return {{"floors", spec.floors}, {"phases", phases}, {"m", spec.m},
          {"cf", spec.cf},         {"ent", spec.ent},  {"ext", spec.ext}};
}

TrafficSpec load_traffic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open traffic spec: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return traffic_spec_from_json(j);
}

namespace {

struct Trip {
  ArrivalTime at;
  int af;
  int df;
};

class TripSampler {
 public:
  TripSampler(int floors, std::mt19937_64& rng) : floors_(floors), rng_(rng) {}

  int floor_in(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Trip interfloor(ArrivalTime at) {
    const int af = floor_in(1, floors_);
    int df = floor_in(1, floors_ - 1);
    if (df >= af) ++df;
    return {at, af, df};
  }
  Trip incoming(ArrivalTime at) { return {at, 1, floor_in(2, floors_)}; }
  Trip outgoing(ArrivalTime at) { return {at, floor_in(2, floors_), 1}; }

  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

 private:
  int floors_;
  std::mt19937_64& rng_;
};

void generate_phase(const TrafficPhase& ph, TripSampler& sampler, std::mt19937_64& rng,
                    std::vector<Trip>& trips) {
  if (ph.passengers < 0) throw ConfigError("passenger count must be non-negative");
  if (ph.passengers == 0) return;
  if (ph.end <= ph.start || ph.start < 0) throw ConfigError("empty or negative time window");
  const auto span = ph.end - ph.start;
  auto uniform_time = [&] {
    return ph.start + std::uniform_int_distribution<ArrivalTime>(0, span - 1)(rng);
  };

  switch (ph.profile) {
    case TrafficProfile::uniform:
      for (int i = 0; i < ph.passengers; ++i) trips.push_back(sampler.interfloor(uniform_time()));
      break;
    case TrafficProfile::up_peak: {
      // 5% interfloor, the rest enter at the lobby. Exact by construction.
      const int interfloor = ph.passengers / 20;
      std::vector<bool> is_interfloor(static_cast<std::size_t>(ph.passengers), false);
      std::fill_n(is_interfloor.begin(), interfloor, true);
      std::shuffle(is_interfloor.begin(), is_interfloor.end(), rng);
      for (bool inter : is_interfloor) {
        const auto at = uniform_time();
        trips.push_back(inter ? sampler.interfloor(at) : sampler.incoming(at));
      }
      break;
    }
    case TrafficProfile::lunch_peak: {
      // Triangular arrival density peaking mid-window; outgoing traffic
      // dominates the first half, incoming the second.
      const double mid = static_cast<double>(ph.start) + static_cast<double>(span) / 2.0;
      for (int i = 0; i < ph.passengers; ++i) {
        const double u = (sampler.unit() + sampler.unit()) / 2.0;
        auto at = ph.start + static_cast<ArrivalTime>(std::floor(u * static_cast<double>(span)));
        at = std::min(at, ph.end - 1);
        const bool first_half = static_cast<double>(at) < mid;
        const double r = sampler.unit();
        if (r < 0.15) {
          trips.push_back(sampler.interfloor(at));
        } else if ((r < 0.65) == first_half) {
          trips.push_back(sampler.outgoing(at));
        } else {
          trips.push_back(sampler.incoming(at));
        }
      }
      break;
    }
  }
}

}  // namespace

TestInput generate_trace(const TrafficSpec& spec, std::uint64_t seed) {
  if (spec.floors < 2) throw ConfigError("a building needs at least 2 floors");
  std::mt19937_64 rng(seed);
  TripSampler sampler(spec.floors, rng);
  std::vector<Trip> trips;
  for (const auto& ph : spec.phases) generate_phase(ph, sampler, rng, trips);

  std::stable_sort(trips.begin(), trips.end(),
                   [](const Trip& a, const Trip& b) { return a.at < b.at; });
  std::vector<Passenger> passengers;
  passengers.reserve(trips.size());
  int id = 0;
  for (const auto& t : trips) {
    passengers.push_back(Passenger{++id, t.at, t.af, t.df, spec.m, spec.cf, spec.ent, spec.ext});
  }
  return TestInput(std::move(passengers));
}

}  // namespace liftdd
