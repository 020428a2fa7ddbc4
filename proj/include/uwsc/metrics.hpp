// Run metrics: append-only during a run, serialized as a JSON summary plus a
// CSV time series. Key set and column order are frozen; see
// docs/output_schema.md.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace uwsc::sim {

struct DockingEvent {
  double t_s = 0.0;
  std::uint32_t robot = 0;
  double energy = 0.0;
  // Fresh neighbor knowledge at the moment of docking, for auditing that the
  // docked robot was its contention cluster's energy minimum.
  std::vector<std::pair<std::uint32_t, double>> fresh_neighbor_energies;
};

struct EchoEvent {
  double t_s = 0.0;
  std::uint32_t robot = 0;
  std::uint32_t packet_sender = 0;
};

struct SeriesSample {
  double t_s = 0.0;
  std::uint32_t robot = 0;
  double z_m = 0.0;
  double energy = 0.0;
};

struct Metrics {
  std::string scenario;
  std::uint64_t seed = 0;
  double horizon_s = 0.0;
  double tick_s = 0.0;
  int robots = 0;
  double tank_volume_m3 = 0.0;
  double local_comm_radius_m = 0.0;

  long packets_sent = 0;
  long packets_delivered = 0;
  long packets_collided = 0;
  long packets_out_of_range = 0;
  long ambient_detections = 0;

  std::vector<EchoEvent> echo_events;
  std::vector<DockingEvent> dockings;
  std::map<std::uint32_t, long> ascent_counts;
  std::vector<double> ranging_errors_m;
  std::vector<double> final_energies;
  std::vector<SeriesSample> series;

  /// Deterministic JSON: ordered keys, shortest-round-trip doubles. Two runs
  /// with equal config and seed produce byte-identical output.
  std::string to_json() const;

  /// Frozen columns: t_s,robot,z_m,energy
  void write_series_csv(std::ostream& out) const;
};

}  // namespace uwsc::sim
