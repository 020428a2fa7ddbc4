// Scenario configuration: a small sectioned key = value format with strict
// (unknown keys rejected) parsing and field-level diagnostics.
#pragma once

#include "uwsc/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uwsc::sim {

struct ObstacleConfig {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  double reflectivity = 0.5;
};

/// Everything a run needs. Sections: [world], [robots], [channels],
/// [protocol], [run], plus one [obstacle] section per obstacle.
struct ScenarioConfig {
  std::string name = "scenario";

  // [world]
  Vec3 tank_m = Vec3(2.5, 1.0, 2.0);
  double wall_reflectivity = 0.5;
  std::optional<Vec3> station_position;
  double station_radius_m = 0.2;       // horizontal catch radius
  double station_z_tolerance_m = 0.1;  // vertical capture band
  double station_recharge_per_s = 0.05;
  std::vector<ObstacleConfig> obstacles;

  // [robots]
  int count = 0;
  std::vector<Vec3> positions;      // explicit placement; empty = seeded uniform
  std::vector<double> energies;     // explicit energies; empty = seeded uniform
  double energy_min = 0.2;
  double energy_max = 0.9;
  double drain_per_s = 0.002;
  double recharge_threshold = 0.3;
  double max_vertical_speed_m_s = 0.15;
  double horizontal_drift_m_s = 0.0;

  // [channels]
  std::vector<std::string> enabled = {"blue"};
  std::string digital = "blue";     // carries packets
  std::string analog;               // carries the additive light field; empty = none
  std::string override_file;        // optional channel dataset override

  // [protocol]
  double duty_period_s = 2.0;
  int ladder_levels = 16;
  double staleness_periods = 5.0;   // freshness limit in duty periods
  bool active_sensing = false;
  double ranging_timeout_periods = 2.5;
  double resense_periods = 5.0;     // dwell in Cooperation before re-ranging
  double ambient_threshold = 0.05;  // linear intensity
  double pressure_saturation = 2.0; // linear intensity mapping to full descent

  // [run]
  double horizon_s = 60.0;
  double tick_s = 0.05;
  std::uint64_t seed = 1;
  double metrics_interval_s = 0.5;

  double staleness_limit_s() const { return staleness_periods * duty_period_s; }
  double tank_volume_m3() const { return tank_m.x() * tank_m.y() * tank_m.z(); }

  static ScenarioConfig load(const std::string& path);
  static ScenarioConfig parse(std::istream& in, const std::string& name);

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Numeric override for parameter sweeps, addressed as "section.key"
  /// (e.g. "robots.count", "world.wall_reflectivity", "run.horizon_s").
  void set_param(const std::string& path, double value);
};

}  // namespace uwsc::sim
