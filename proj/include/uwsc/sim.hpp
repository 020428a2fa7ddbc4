// Deterministic discrete-event world: duty-cycled transmissions over a fixed
// kinematic tick, channel-gated packet delivery with contention, planar mirror
// echoes, additive optical intensity, docking, and metric collection. One
// World per simulation instance, mutated only by its own event loop.
#pragma once

#include "uwsc/channel.hpp"
#include "uwsc/core.hpp"
#include "uwsc/metrics.hpp"
#include "uwsc/protocol.hpp"
#include "uwsc/scenario.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uwsc::sim {

struct Obstacle {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  double reflectivity = 0.5;
};

/// Surface station with capacity 1. Robots move vertically, so the catch
/// volume is a cylinder: within radius_m horizontally and z_tolerance_m of
/// the station depth.
struct DockingStation {
  Vec3 position = Vec3::Zero();
  double radius_m = 0.2;
  double z_tolerance_m = 0.1;
  double recharge_per_s = 0.05;
  std::optional<protocol::RobotId> occupant;
};

struct TransceiverConfig {
  double tx_power_db = 0.0;
  double sensitivity_db = 0.0;  // detection floor
  bool enabled = true;
  bool analog_emit = false;
};

struct RobotState {
  protocol::RobotId id;
  Vec3 position = Vec3::Zero();
  double vertical_velocity_m_s = 0.0;
  double energy = 1.0;
  double energy_drain_per_s = 0.0;
  protocol::DutyCycle duty;
  protocol::ActiveSensingState sensing;
  protocol::ArbitrationState arbitration;
  std::map<std::string, TransceiverConfig> transceivers;
  bool docked = false;

  // Bookkeeping for the discovery handshake and freshness policies.
  double last_fresh_info_s = -1e30;
  std::optional<protocol::RobotId> heard_peer;
  bool sent_since_heard = false;
  double last_peer_heard_s = -1e30;
  double cooperation_since_s = -1e30;
  long last_send_window = -1;
};

enum class DeliveryStatus { Delivered, OutOfRange, Collided };

const char* delivery_status_name(DeliveryStatus s);

struct DeliveryOutcome {
  protocol::RobotId receiver;
  DeliveryStatus status = DeliveryStatus::OutOfRange;
  double latency_s = 0.0;  // propagation delay (sonar); optical/RF/e-field arrive instantly
  protocol::Packet packet;
};

struct EchoResult {
  protocol::Packet packet;     // returns to its own sender
  double delay_s = 0.0;
  double received_db = 0.0;
  double surface_distance_m = 0.0;
};

class World {
 public:
  World(const ScenarioConfig& config, Seed seed);

  /// Resolves a batch of simultaneous transmissions against every potential
  /// receiver (enabled channel, listening at arrival, not the sender, not
  /// docked). Each potential receiver gets exactly one outcome per packet:
  /// Delivered, OutOfRange, or Collided. Two distinct senders audible at the
  /// same receiver on the same channel destroy each other's packets there;
  /// a same-sender burst does not collide with itself.
  std::vector<DeliveryOutcome> deliver(std::span<const protocol::Packet> packets) const;

  /// Mirror echo off the nearest reflecting surface (tank walls and obstacle
  /// faces). Returns the packet on its way back to the sender when the
  /// round-trip loss, scaled by surface reflectivity, stays inside the
  /// sender's own sensitivity budget.
  std::optional<EchoResult> echo(const protocol::Packet& packet) const;

  /// Sum of the linearized received intensities of every currently emitting
  /// robot on the analog channel. dB-to-linear conversion happens only here.
  double aggregate_intensity(const Vec3& at, const channel::ChannelModel& chan,
                             std::optional<protocol::RobotId> exclude = std::nullopt) const;

  /// Advances one kinematic tick: due deliveries, duty-cycle transmissions,
  /// contention resolution, echoes, protocol transitions, vertical drive
  /// integration, energy drain/recharge, docking.
  void step();

  /// Steps until the configured horizon and finalizes metrics.
  void run();

  double clock_s() const { return clock_s_; }
  const ScenarioConfig& config() const { return config_; }
  const std::vector<channel::ChannelModel>& channels() const { return channels_; }
  const channel::ChannelModel& channel_by_name(std::string_view name) const;
  const std::vector<RobotState>& robots() const { return robots_; }
  std::vector<RobotState>& robots_mutable() { return robots_; }
  const std::optional<DockingStation>& station() const { return station_; }
  const Metrics& metrics() const { return metrics_; }
  const std::vector<std::string>& trace() const { return trace_; }

 private:
  struct ScheduledDelivery {
    double due_s = 0.0;
    std::uint64_t sequence = 0;
    protocol::RobotId receiver;
    protocol::Packet packet;
  };

  bool listening(const RobotState& robot, double t_s) const;
  double effective_sensitivity_db(const RobotState& robot, const std::string& chan) const;
  std::optional<std::pair<double, double>> nearest_surface(const Vec3& p) const;  // (distance, reflectivity)
  void emit_duty_cycle(double t_s, std::vector<protocol::Packet>& out);
  void apply_reception(RobotState& robot, const protocol::Packet& packet, double t_s);
  void feed_sensing_event(RobotState& robot, const protocol::SensingEvent& event, double t_s);
  void update_arbitration(double t_s);
  void integrate_motion(double t_s);
  void record_series(double t_s);
  RobotState* find_robot(protocol::RobotId id);
  const RobotState* find_robot(protocol::RobotId id) const;

  ScenarioConfig config_;
  std::vector<channel::ChannelModel> channels_;
  std::vector<RobotState> robots_;
  std::optional<DockingStation> station_;
  std::vector<Obstacle> obstacles_;
  protocol::SensitivityLadder ladder_;
  Rng rng_;
  double clock_s_ = 0.0;
  double next_series_s_ = 0.0;
  std::uint64_t sequence_ = 0;
  std::vector<ScheduledDelivery> pending_;  // kept sorted by (due, sequence)
  Metrics metrics_;
  std::vector<std::string> trace_;
};

/// Builds a world, runs it to the horizon, returns the metrics. Deterministic
/// per (config, seed).
Metrics run_scenario(const ScenarioConfig& config, Seed seed);

}  // namespace uwsc::sim
