#include "uwsc/metrics.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace uwsc::sim {

std::string Metrics::to_json() const {
  using json = nlohmann::ordered_json;
  json j;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["horizon_s"] = horizon_s;
  j["tick_s"] = tick_s;
  j["robots"] = robots;
  j["tank_volume_m3"] = tank_volume_m3;
  j["local_comm_radius_m"] = local_comm_radius_m;

  j["packets"] = {{"sent", packets_sent},
                  {"delivered", packets_delivered},
                  {"collided", packets_collided},
                  {"out_of_range", packets_out_of_range}};
  j["ambient_detections"] = ambient_detections;

  json echoes = json::array();
  for (const auto& e : echo_events) {
    echoes.push_back({{"t_s", e.t_s}, {"robot", e.robot}, {"packet_sender", e.packet_sender}});
  }
  j["echoes"] = {{"count", echo_events.size()}, {"events", std::move(echoes)}};

  json docks = json::array();
  for (const auto& d : dockings) {
    json fresh = json::array();
    for (const auto& [id, energy] : d.fresh_neighbor_energies) {
      fresh.push_back({{"robot", id}, {"energy", energy}});
    }
    docks.push_back({{"t_s", d.t_s},
                     {"robot", d.robot},
                     {"energy", d.energy},
                     {"fresh_neighbor_energies", std::move(fresh)}});
  }
  j["dockings"] = std::move(docks);

  json ascents = json::array();
  for (const auto& [id, n] : ascent_counts) {
    ascents.push_back({{"robot", id}, {"count", n}});
  }
  j["ascent_counts"] = std::move(ascents);

  j["ranging_errors_m"] = ranging_errors_m;
  j["final_energies"] = final_energies;
  return j.dump(2) + "\n";
}

void Metrics::write_series_csv(std::ostream& out) const {
  out << "t_s,robot,z_m,energy\n";
  char line[128];
  for (const auto& s : series) {
    std::snprintf(line, sizeof(line), "%.3f,%u,%.9g,%.9g\n", s.t_s, s.robot, s.z_m, s.energy);
    out << line;
  }
}

}  // namespace uwsc::sim
