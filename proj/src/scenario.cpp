#include "uwsc/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uwsc::sim {

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  raise(ErrorCode::ConfigError, where + ": " + what);
}

double to_number(const std::string& where, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(x)) throw std::invalid_argument("bad");
    return x;
  } catch (const std::exception&) {
    fail(where, "not a number: '" + value + "'");
  }
}

bool to_bool(const std::string& where, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  fail(where, "not a boolean: '" + value + "'");
}

std::vector<double> to_numbers(const std::string& where, const std::string& value) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(to_number(where, token));
  return out;
}

Vec3 to_vec3(const std::string& where, const std::string& value) {
  const auto v = to_numbers(where, value);
  if (v.size() != 3) fail(where, "expected three numbers");
  return Vec3(v[0], v[1], v[2]);
}

std::vector<std::string> to_words(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

// Semicolon-separated triples: "0.2 0.5 0.5 ; 1.0 0.5 0.5"
std::vector<Vec3> to_vec3_list(const std::string& where, const std::string& value) {
  std::vector<Vec3> out;
  std::string chunk;
  std::istringstream in(value);
  while (std::getline(in, chunk, ';')) {
    chunk = trim(chunk);
    if (chunk.empty()) continue;
    out.push_back(to_vec3(where, chunk));
  }
  return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(std::istream& in, const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;

  std::string line;
  std::string section;
  ObstacleConfig* obstacle = nullptr;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no);

    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "obstacle") {
        cfg.obstacles.emplace_back();
        obstacle = &cfg.obstacles.back();
      } else if (section != "world" && section != "robots" && section != "channels" &&
                 section != "protocol" && section != "run") {
        fail(where, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = "[" + section + "] " + key + " (" + where + ")";

    if (section == "world") {
      if (key == "tank") cfg.tank_m = to_vec3(field, value);
      else if (key == "wall_reflectivity") cfg.wall_reflectivity = to_number(field, value);
      else if (key == "station") cfg.station_position = to_vec3(field, value);
      else if (key == "station_radius") cfg.station_radius_m = to_number(field, value);
      else if (key == "station_z_tolerance") cfg.station_z_tolerance_m = to_number(field, value);
      else if (key == "station_recharge_per_s") cfg.station_recharge_per_s = to_number(field, value);
      else fail(field, "unknown key");
    } else if (section == "obstacle") {
      if (obstacle == nullptr) fail(field, "key outside an [obstacle] section");
      if (key == "min") obstacle->min = to_vec3(field, value);
      else if (key == "max") obstacle->max = to_vec3(field, value);
      else if (key == "reflectivity") obstacle->reflectivity = to_number(field, value);
      else fail(field, "unknown key");
    } else if (section == "robots") {
      if (key == "count") cfg.count = static_cast<int>(to_number(field, value));
      else if (key == "positions") cfg.positions = to_vec3_list(field, value);
      else if (key == "energies") cfg.energies = to_numbers(field, value);
      else if (key == "energy_min") cfg.energy_min = to_number(field, value);
      else if (key == "energy_max") cfg.energy_max = to_number(field, value);
      else if (key == "drain_per_s") cfg.drain_per_s = to_number(field, value);
      else if (key == "recharge_threshold") cfg.recharge_threshold = to_number(field, value);
      else if (key == "max_vertical_speed") cfg.max_vertical_speed_m_s = to_number(field, value);
      else if (key == "horizontal_drift") cfg.horizontal_drift_m_s = to_number(field, value);
      else fail(field, "unknown key");
    } else if (section == "channels") {
      if (key == "enabled") cfg.enabled = to_words(value);
      else if (key == "digital") cfg.digital = value;
      else if (key == "analog") cfg.analog = value == "none" ? "" : value;
      else if (key == "override_file") cfg.override_file = value;
      else fail(field, "unknown key");
    } else if (section == "protocol") {
      if (key == "duty_period_s") cfg.duty_period_s = to_number(field, value);
      else if (key == "ladder_levels") cfg.ladder_levels = static_cast<int>(to_number(field, value));
      else if (key == "staleness_periods") cfg.staleness_periods = to_number(field, value);
      else if (key == "active_sensing") cfg.active_sensing = to_bool(field, value);
      else if (key == "ranging_timeout_periods") cfg.ranging_timeout_periods = to_number(field, value);
      else if (key == "resense_periods") cfg.resense_periods = to_number(field, value);
      else if (key == "ambient_threshold") cfg.ambient_threshold = to_number(field, value);
      else if (key == "pressure_saturation") cfg.pressure_saturation = to_number(field, value);
      else fail(field, "unknown key");
    } else if (section == "run") {
      if (key == "horizon_s") cfg.horizon_s = to_number(field, value);
      else if (key == "tick_s") cfg.tick_s = to_number(field, value);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_number(field, value));
      else if (key == "metrics_interval_s") cfg.metrics_interval_s = to_number(field, value);
      else fail(field, "unknown key");
    } else {
      fail(field, "key before any section");
    }
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigError, "cannot open scenario file '" + path + "'");
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  if (dot != std::string::npos) base.erase(dot);
  return parse(in, base);
}

void ScenarioConfig::validate() const {
  const auto check = [](bool ok, const std::string& field, const std::string& what) {
    if (!ok) fail(field, what);
  };
  check(tank_m.x() > 0 && tank_m.y() > 0 && tank_m.z() > 0, "[world] tank", "must be positive");
  check(wall_reflectivity >= 0.0 && wall_reflectivity <= 1.0, "[world] wall_reflectivity",
        "must be in [0, 1]");
  check(count >= 0, "[robots] count", "must be non-negative");
  check(positions.empty() || static_cast<int>(positions.size()) == count, "[robots] positions",
        "must list exactly count entries");
  check(energies.empty() || static_cast<int>(energies.size()) == count, "[robots] energies",
        "must list exactly count entries");
  for (const double e : energies) {
    check(e >= 0.0 && e <= 1.0, "[robots] energies", "entries must be in [0, 1]");
  }
  check(energy_min >= 0.0 && energy_max <= 1.0 && energy_min <= energy_max,
        "[robots] energy_min/energy_max", "need 0 <= min <= max <= 1");
  check(drain_per_s >= 0.0, "[robots] drain_per_s", "must be non-negative");
  check(recharge_threshold >= 0.0 && recharge_threshold <= 1.0, "[robots] recharge_threshold",
        "must be in [0, 1]");
  check(max_vertical_speed_m_s >= 0.0, "[robots] max_vertical_speed", "must be non-negative");
  check(!enabled.empty(), "[channels] enabled", "need at least one channel");
  bool digital_enabled = false;
  bool analog_enabled = analog.empty();
  for (const auto& c : enabled) {
    if (c == digital) digital_enabled = true;
    if (c == analog) analog_enabled = true;
  }
  check(digital_enabled, "[channels] digital", "'" + digital + "' is not in the enabled set");
  check(analog_enabled, "[channels] analog", "'" + analog + "' is not in the enabled set");
  check(duty_period_s > 0.0, "[protocol] duty_period_s", "must be positive");
  check(ladder_levels >= 2, "[protocol] ladder_levels", "need at least two levels");
  check(staleness_periods > 0.0, "[protocol] staleness_periods", "must be positive");
  check(ambient_threshold >= 0.0, "[protocol] ambient_threshold", "must be non-negative");
  check(pressure_saturation > 0.0, "[protocol] pressure_saturation", "must be positive");
  check(horizon_s >= 0.0, "[run] horizon_s", "must be non-negative");
  check(tick_s > 0.0, "[run] tick_s", "must be positive");
  check(metrics_interval_s > 0.0, "[run] metrics_interval_s", "must be positive");
  for (const auto& o : obstacles) {
    check(o.min.x() <= o.max.x() && o.min.y() <= o.max.y() && o.min.z() <= o.max.z(),
          "[obstacle] min/max", "min must not exceed max");
    check(o.reflectivity >= 0.0 && o.reflectivity <= 1.0, "[obstacle] reflectivity",
          "must be in [0, 1]");
  }
}

void ScenarioConfig::set_param(const std::string& path, double value) {
  if (path == "world.wall_reflectivity") wall_reflectivity = value;
  else if (path == "world.station_radius") station_radius_m = value;
  else if (path == "world.station_z_tolerance") station_z_tolerance_m = value;
  else if (path == "world.station_recharge_per_s") station_recharge_per_s = value;
  else if (path == "robots.count") { count = static_cast<int>(value); positions.clear(); energies.clear(); }
  else if (path == "robots.energy_min") energy_min = value;
  else if (path == "robots.energy_max") energy_max = value;
  else if (path == "robots.drain_per_s") drain_per_s = value;
  else if (path == "robots.recharge_threshold") recharge_threshold = value;
  else if (path == "robots.max_vertical_speed") max_vertical_speed_m_s = value;
  else if (path == "robots.horizontal_drift") horizontal_drift_m_s = value;
  else if (path == "protocol.duty_period_s") duty_period_s = value;
  else if (path == "protocol.ladder_levels") ladder_levels = static_cast<int>(value);
  else if (path == "protocol.staleness_periods") staleness_periods = value;
  else if (path == "protocol.ranging_timeout_periods") ranging_timeout_periods = value;
  else if (path == "protocol.resense_periods") resense_periods = value;
  else if (path == "protocol.ambient_threshold") ambient_threshold = value;
  else if (path == "protocol.pressure_saturation") pressure_saturation = value;
  else if (path == "run.horizon_s") horizon_s = value;
  else if (path == "run.tick_s") tick_s = value;
  else if (path == "run.seed") seed = static_cast<std::uint64_t>(value);
  else if (path == "run.metrics_interval_s") metrics_interval_s = value;
  else raise(ErrorCode::ConfigError, "unknown sweep parameter '" + path + "'");
  validate();
}

}  // namespace uwsc::sim
