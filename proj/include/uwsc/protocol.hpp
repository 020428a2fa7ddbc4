// Swarm coordination protocols as explicit state machines: duty-cycled ID
// broadcast with echo classification, three-phase active sensing with a
// sensitivity sweep, and lowest-energy docking arbitration with optical
// pressure. Every transition is a pure function of (state, event) so runs can
// be replayed deterministically.
#pragma once

#include "uwsc/channel.hpp"
#include "uwsc/core.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace uwsc::protocol {

struct RobotId {
  std::uint32_t value = 0;
  auto operator<=>(const RobotId&) const = default;
};

enum class PacketKind { IdBeacon, EnergyValue, SensingProbe, Data };

const char* packet_kind_name(PacketKind k);

/// Typed message on one channel. The channel is referenced by name and
/// resolved against the world's channel set at delivery time.
struct Packet {
  PacketKind kind = PacketKind::IdBeacon;
  RobotId sender;
  double payload = 0.0;  // EnergyValue carries energy in [0, 1]
  std::string channel;
  double tx_power_db = 0.0;
  double timestamp_s = 0.0;
};

/// 95% listening / 5% sending, phase-shifted per robot so the swarm does not
/// transmit in lockstep.
struct DutyCycle {
  double listen_fraction = 0.95;
  double send_fraction = 0.05;
  double period_s = 2.0;
  double phase_offset_s = 0.0;
};

enum class Slot { Listen, Send };

/// Send during the first send_fraction of each phase-shifted period.
Slot duty_cycle_slot(const DutyCycle& dc, double t_s);

enum class ReceptionKind { Neighbor, Echo, AmbientLight };

const char* reception_kind_name(ReceptionKind k);

struct Classified {
  ReceptionKind kind = ReceptionKind::AmbientLight;
  std::optional<RobotId> peer;  // set for Neighbor
};

/// Unmodulated energy sensed on a digital channel.
struct UnmodulatedLight {
  double intensity = 0.0;
};

/// A packet bearing another robot's ID is a neighbor; a packet bearing our own
/// ID came back off a passive reflector; raw light is ambient.
Classified interpret_reception(RobotId own, const Packet& packet);
Classified interpret_reception(RobotId own, const UnmodulatedLight& light);

/// Discrete receiver-sensitivity ladder used by the ranging sweep: thresholds
/// run linearly in dB (geometrically in linear intensity) from the detection
/// floor at the most sensitive level up to tx_power at level 0, so the
/// corresponding distances are evenly spaced from max range down to zero.
struct SensitivityLadder {
  double tx_power_db = 0.0;
  double floor_db = 0.0;
  int levels = 16;

  int top_level() const { return levels - 1; }

  /// Threshold at a level; level 0 is the least sensitive rung.
  double threshold_db(int level) const;
};

/// Distance at which a transmission at tx_power_db fades to threshold_db.
/// Throws OutOfRange when the threshold exceeds the transmit power.
double sensitivity_to_distance(double threshold_db, const channel::ChannelModel& chan,
                               double tx_power_db);

/// Distance quantization step of a ladder on a channel.
double ladder_gap_m(const SensitivityLadder& ladder, const channel::ChannelModel& chan);

enum class SensingPhase { Discovery, Ranging, Cooperation };

const char* sensing_phase_name(SensingPhase p);

struct ActiveSensingState {
  SensingPhase phase = SensingPhase::Discovery;
  std::optional<RobotId> peer;
  int sensitivity_level = 0;
  std::optional<double> distance_estimate_m;
};

/// Events consumed by the active-sensing machine. The simulator classifies
/// receptions, decides when the mutual ID exchange has completed, and turns
/// peer packets heard during Ranging into Ack events.
struct ReceptionEvent {
  Classified what;
  bool exchange_complete = false;
};
struct TimeoutEvent {};
struct AckEvent {};

using SensingEvent = std::variant<ReceptionEvent, TimeoutEvent, AckEvent>;

std::string sensing_event_name(const SensingEvent& event);

/// One transition. Discovery loops until a mutual ID exchange completes, then
/// Ranging sweeps the sensitivity ladder downward from the most sensitive
/// level; the first silent level fixes the distance estimate at the previous
/// level's range and the machine parks in Cooperation. A timeout at the top
/// level means the peer was lost and Discovery restarts. Events that are
/// impossible in the current phase throw ProtocolViolation.
ActiveSensingState active_sensing_step(const ActiveSensingState& state, const SensingEvent& event,
                                       const SensitivityLadder& ladder,
                                       const channel::ChannelModel& chan);

enum class Decision { Ascend, Descend, Undecided };

const char* decision_name(Decision d);

struct NeighborEnergy {
  double energy = 0.0;
  double timestamp_s = 0.0;
};

/// Everything one robot knows for the docking contest.
struct ArbitrationState {
  RobotId id;
  double own_energy = 1.0;
  double recharge_threshold = 0.3;
  std::map<std::uint32_t, NeighborEnergy> neighbor_energies;
  Decision decision = Decision::Undecided;
};

/// Ascend iff our energy is strictly below every fresh neighbor's (entries
/// older than staleness_limit_s are ignored); exact ties go to the lower
/// RobotId. With no fresh information at all the result is Undecided when we
/// are hungry (below the recharge threshold) and Descend otherwise.
Decision arbitration_decide(const ArbitrationState& state, double staleness_limit_s, double now_s);

/// Collective optical pressure: vertical drive in [-1, 1], pushed down in
/// proportion to the total sensed neighbor light (linear units, saturating at
/// saturation_intensity). An Ascend decision overrides everything with +1.
double blue_gradient_response(std::span<const double> intensities, Decision decision,
                              double saturation_intensity = 1.0);

/// Protocol trace line, stable format for replay and debugging:
///   <time s, 3 decimals> <robot> <state-before> <event> <state-after>
std::string trace_line(double t_s, RobotId robot, const std::string& before,
                       const std::string& event, const std::string& after);

}  // namespace uwsc::protocol
