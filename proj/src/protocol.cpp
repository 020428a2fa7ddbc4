#include "uwsc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace uwsc::protocol {

const char* packet_kind_name(PacketKind k) {
  switch (k) {
    case PacketKind::IdBeacon: return "id-beacon";
    case PacketKind::EnergyValue: return "energy";
    case PacketKind::SensingProbe: return "probe";
    case PacketKind::Data: return "data";
  }
  return "?";
}

Slot duty_cycle_slot(const DutyCycle& dc, double t_s) {
  if (dc.period_s <= 0.0) raise(ErrorCode::InvalidArgument, "duty period must be positive");
  if (std::abs(dc.listen_fraction + dc.send_fraction - 1.0) > 1e-9) {
    raise(ErrorCode::InvalidArgument, "listen and send fractions must sum to 1");
  }
  double phase = std::fmod(t_s - dc.phase_offset_s, dc.period_s);
  if (phase < 0.0) phase += dc.period_s;
  return phase < dc.send_fraction * dc.period_s ? Slot::Send : Slot::Listen;
}

const char* reception_kind_name(ReceptionKind k) {
  switch (k) {
    case ReceptionKind::Neighbor: return "neighbor";
    case ReceptionKind::Echo: return "echo";
    case ReceptionKind::AmbientLight: return "ambient";
  }
  return "?";
}

Classified interpret_reception(RobotId own, const Packet& packet) {
  if (packet.sender == own) {
    return Classified{ReceptionKind::Echo, own};
  }
  return Classified{ReceptionKind::Neighbor, packet.sender};
}

Classified interpret_reception(RobotId, const UnmodulatedLight&) {
  return Classified{ReceptionKind::AmbientLight, std::nullopt};
}

double SensitivityLadder::threshold_db(int level) const {
  if (levels < 2) raise(ErrorCode::InvalidArgument, "ladder needs at least two levels");
  if (level < 0 || level >= levels) raise(ErrorCode::InvalidArgument, "ladder level out of range");
  const double span = tx_power_db - floor_db;
  return floor_db + span * static_cast<double>(levels - 1 - level) / static_cast<double>(levels - 1);
}

double sensitivity_to_distance(double threshold_db, const channel::ChannelModel& chan,
                               double tx_power_db) {
  if (threshold_db > tx_power_db) {
    raise(ErrorCode::OutOfRange, "threshold above transmit power is never reached");
  }
  return (tx_power_db - threshold_db) / chan.attenuation_db_per_m;
}

double ladder_gap_m(const SensitivityLadder& ladder, const channel::ChannelModel& chan) {
  const double full = sensitivity_to_distance(ladder.threshold_db(ladder.top_level()), chan,
                                              ladder.tx_power_db);
  return full / static_cast<double>(ladder.levels - 1);
}

const char* sensing_phase_name(SensingPhase p) {
  switch (p) {
    case SensingPhase::Discovery: return "Discovery";
    case SensingPhase::Ranging: return "Ranging";
    case SensingPhase::Cooperation: return "Cooperation";
  }
  return "?";
}

std::string sensing_event_name(const SensingEvent& event) {
  if (std::holds_alternative<TimeoutEvent>(event)) return "timeout";
  if (std::holds_alternative<AckEvent>(event)) return "ack";
  const auto& reception = std::get<ReceptionEvent>(event);
  std::string name = "recv:";
  name += reception_kind_name(reception.what.kind);
  if (reception.what.peer) {
    name += "(" + std::to_string(reception.what.peer->value) + ")";
  }
  if (reception.exchange_complete) name += "+x";
  return name;
}

ActiveSensingState active_sensing_step(const ActiveSensingState& state, const SensingEvent& event,
                                       const SensitivityLadder& ladder,
                                       const channel::ChannelModel& chan) {
  ActiveSensingState next = state;
  switch (state.phase) {
    case SensingPhase::Discovery: {
      if (std::holds_alternative<AckEvent>(event)) {
        raise(ErrorCode::ProtocolViolation, "ack without a ranging sweep in progress");
      }
      if (std::holds_alternative<TimeoutEvent>(event)) {
        return next;  // keep iterating discovery
      }
      const auto& reception = std::get<ReceptionEvent>(event);
      if (reception.what.kind == ReceptionKind::Neighbor && reception.exchange_complete) {
        next.phase = SensingPhase::Ranging;
        next.peer = reception.what.peer;
        next.sensitivity_level = ladder.top_level();
        next.distance_estimate_m.reset();
      }
      return next;  // echoes, ambient light and half-done exchanges do not advance
    }
    case SensingPhase::Ranging: {
      if (std::holds_alternative<AckEvent>(event)) {
        if (state.sensitivity_level == 0) {
          // Heard the peer even at the least sensitive rung: contact range.
          next.phase = SensingPhase::Cooperation;
          next.distance_estimate_m =
              sensitivity_to_distance(ladder.threshold_db(0), chan, ladder.tx_power_db);
          return next;
        }
        next.sensitivity_level = state.sensitivity_level - 1;
        return next;
      }
      if (std::holds_alternative<TimeoutEvent>(event)) {
        if (state.sensitivity_level == ladder.top_level()) {
          // Silent at full sensitivity: the peer is gone, start over.
          next = ActiveSensingState{};
          return next;
        }
        const int last_heard = state.sensitivity_level + 1;
        next.phase = SensingPhase::Cooperation;
        next.distance_estimate_m =
            sensitivity_to_distance(ladder.threshold_db(last_heard), chan, ladder.tx_power_db);
        return next;
      }
      return next;  // stray receptions during the sweep are ignored
    }
    case SensingPhase::Cooperation:
      raise(ErrorCode::ProtocolViolation, "cooperation is terminal for the sensing machine");
  }
  return next;
}

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::Ascend: return "Ascend";
    case Decision::Descend: return "Descend";
    case Decision::Undecided: return "Undecided";
  }
  return "?";
}

Decision arbitration_decide(const ArbitrationState& state, double staleness_limit_s, double now_s) {
  bool any_fresh = false;
  for (const auto& [id, entry] : state.neighbor_energies) {
    if (now_s - entry.timestamp_s > staleness_limit_s) continue;
    any_fresh = true;
    if (entry.energy < state.own_energy) return Decision::Descend;
    if (entry.energy == state.own_energy && id < state.id.value) return Decision::Descend;
  }
  if (any_fresh) return Decision::Ascend;
  return state.own_energy < state.recharge_threshold ? Decision::Undecided : Decision::Descend;
}

double blue_gradient_response(std::span<const double> intensities, Decision decision,
                              double saturation_intensity) {
  if (intensities.empty()) raise(ErrorCode::InvalidArgument, "need at least one reading");
  if (decision == Decision::Ascend) return 1.0;
  double total = 0.0;
  for (const double v : intensities) total += std::max(v, 0.0);
  if (saturation_intensity <= 0.0) raise(ErrorCode::InvalidArgument, "saturation must be positive");
  return -std::min(total / saturation_intensity, 1.0);
}

std::string trace_line(double t_s, RobotId robot, const std::string& before,
                       const std::string& event, const std::string& after) {
  char head[64];
  std::snprintf(head, sizeof(head), "%.3f %u ", t_s, robot.value);
  return std::string(head) + before + " " + event + " " + after;
}

}  // namespace uwsc::protocol
