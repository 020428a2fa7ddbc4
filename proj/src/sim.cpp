#include "uwsc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uwsc::sim {

namespace {

constexpr double kSonarSpeedMS = 1500.0;   // sound speed in water
constexpr double kWallMargin = 0.02;       // robots keep off the glass
constexpr double kTimeEps = 1e-9;

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

const char* delivery_status_name(DeliveryStatus s) {
  switch (s) {
    case DeliveryStatus::Delivered: return "delivered";
    case DeliveryStatus::OutOfRange: return "out-of-range";
    case DeliveryStatus::Collided: return "collided";
  }
  return "?";
}

World::World(const ScenarioConfig& config, Seed seed)
    : config_(config), rng_(seed) {
  config_.validate();
  config_.seed = seed.value;

  channels_ = channel::builtin_channels();
  if (!config_.override_file.empty()) {
    channels_ = channel::load_channel_overrides(std::move(channels_), config_.override_file);
  }
  for (const auto& name : config_.enabled) {
    channel_by_name(name);  // throws UnknownChannel on a typo
  }
  const auto& digital = channel_by_name(config_.digital);

  ladder_.tx_power_db = digital.link_budget_db;
  ladder_.floor_db = 0.0;
  ladder_.levels = config_.ladder_levels;

  robots_.reserve(static_cast<std::size_t>(config_.count));
  for (int i = 0; i < config_.count; ++i) {
    RobotState robot;
    robot.id = protocol::RobotId{static_cast<std::uint32_t>(i)};
    if (!config_.positions.empty()) {
      robot.position = config_.positions[static_cast<std::size_t>(i)];
    } else {
      robot.position = Vec3(rng_.uniform(kWallMargin, config_.tank_m.x() - kWallMargin),
                            rng_.uniform(kWallMargin, config_.tank_m.y() - kWallMargin),
                            rng_.uniform(kWallMargin, config_.tank_m.z() - kWallMargin));
    }
    robot.energy = config_.energies.empty() ? rng_.uniform(config_.energy_min, config_.energy_max)
                                            : config_.energies[static_cast<std::size_t>(i)];
    robot.energy_drain_per_s = config_.drain_per_s;
    robot.duty.period_s = config_.duty_period_s;
    robot.duty.phase_offset_s = rng_.uniform(0.0, config_.duty_period_s);
    robot.arbitration.id = robot.id;
    robot.arbitration.own_energy = robot.energy;
    robot.arbitration.recharge_threshold = config_.recharge_threshold;
    // First transmission happens at the first send window that opens after t=0.
    robot.last_send_window =
        static_cast<long>(std::floor(-robot.duty.phase_offset_s / robot.duty.period_s));
    for (const auto& name : config_.enabled) {
      TransceiverConfig tc;
      tc.tx_power_db = channel_by_name(name).link_budget_db;
      tc.sensitivity_db = 0.0;
      tc.enabled = true;
      tc.analog_emit = !config_.analog.empty() && name == config_.analog;
      robot.transceivers.emplace(name, tc);
    }
    robots_.push_back(std::move(robot));
  }
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    for (std::size_t j = i + 1; j < robots_.size(); ++j) {
      if (robots_[i].id == robots_[j].id) {
        raise(ErrorCode::ConfigError, "duplicate robot id at world construction");
      }
    }
  }

  if (config_.station_position) {
    DockingStation station;
    station.position = *config_.station_position;
    station.radius_m = config_.station_radius_m;
    station.z_tolerance_m = config_.station_z_tolerance_m;
    station.recharge_per_s = config_.station_recharge_per_s;
    station_ = station;
  }
  for (const auto& o : config_.obstacles) {
    obstacles_.push_back(Obstacle{o.min, o.max, o.reflectivity});
  }

  metrics_.scenario = config_.name;
  metrics_.seed = seed.value;
  metrics_.horizon_s = config_.horizon_s;
  metrics_.tick_s = config_.tick_s;
  metrics_.robots = config_.count;
  metrics_.tank_volume_m3 = config_.tank_volume_m3();
  metrics_.local_comm_radius_m =
      config_.count >= 1 ? channel::local_comm_radius_m(config_.tank_volume_m3(), config_.count)
                         : 0.0;
  next_series_s_ = config_.metrics_interval_s;
}

const channel::ChannelModel& World::channel_by_name(std::string_view name) const {
  return channel::find_channel(channels_, name);
}

RobotState* World::find_robot(protocol::RobotId id) {
  for (auto& r : robots_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const RobotState* World::find_robot(protocol::RobotId id) const {
  for (const auto& r : robots_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

bool World::listening(const RobotState& robot, double t_s) const {
  return !robot.docked && protocol::duty_cycle_slot(robot.duty, t_s) == protocol::Slot::Listen;
}

double World::effective_sensitivity_db(const RobotState& robot, const std::string& chan) const {
  const auto it = robot.transceivers.find(chan);
  double base = it != robot.transceivers.end() ? it->second.sensitivity_db : 0.0;
  if (config_.active_sensing && chan == config_.digital &&
      robot.sensing.phase == protocol::SensingPhase::Ranging) {
    base = std::max(base, ladder_.threshold_db(robot.sensing.sensitivity_level));
  }
  return base;
}

std::vector<DeliveryOutcome> World::deliver(std::span<const protocol::Packet> packets) const {
  std::vector<DeliveryOutcome> outcomes;

  // Group by channel, first-appearance order.
  std::vector<std::string> channel_order;
  for (const auto& p : packets) {
    if (std::find(channel_order.begin(), channel_order.end(), p.channel) == channel_order.end()) {
      channel_order.push_back(p.channel);
    }
  }

  for (const auto& chan_name : channel_order) {
    const auto& chan = channel_by_name(chan_name);
    std::vector<const protocol::Packet*> group;
    for (const auto& p : packets) {
      if (p.channel == chan_name) group.push_back(&p);
    }
    for (const auto* p : group) {
      if (find_robot(p->sender) == nullptr) {
        raise(ErrorCode::InvalidArgument, "packet sender is not in the world");
      }
    }

    for (const auto& receiver : robots_) {
      const auto tc = receiver.transceivers.find(chan_name);
      if (tc == receiver.transceivers.end() || !tc->second.enabled) continue;

      // Audibility per packet at this receiver.
      std::vector<const protocol::Packet*> considered;
      std::vector<bool> audible;
      std::vector<double> latency;
      std::vector<std::uint32_t> audible_senders;
      for (const auto* p : group) {
        if (p->sender == receiver.id) continue;
        const RobotState* sender = find_robot(p->sender);
        const double d = uwsc::distance(sender->position, receiver.position);
        const double lag = chan.carrier == channel::Carrier::Sonar ? d / kSonarSpeedMS : 0.0;
        if (!listening(receiver, p->timestamp_s + lag)) continue;  // half-duplex: not a receiver
        const double rx_db = channel::received_intensity_db(chan, p->tx_power_db, d);
        const bool heard = rx_db >= effective_sensitivity_db(receiver, chan_name);
        considered.push_back(p);
        audible.push_back(heard);
        latency.push_back(lag);
        if (heard) audible_senders.push_back(p->sender.value);
      }
      std::sort(audible_senders.begin(), audible_senders.end());
      audible_senders.erase(std::unique(audible_senders.begin(), audible_senders.end()),
                            audible_senders.end());
      const bool contention = audible_senders.size() >= 2;

      for (std::size_t i = 0; i < considered.size(); ++i) {
        DeliveryOutcome outcome;
        outcome.receiver = receiver.id;
        outcome.packet = *considered[i];
        outcome.latency_s = latency[i];
        if (!audible[i]) {
          outcome.status = DeliveryStatus::OutOfRange;
        } else {
          outcome.status = contention ? DeliveryStatus::Collided : DeliveryStatus::Delivered;
        }
        outcomes.push_back(std::move(outcome));
      }
    }
  }
  return outcomes;
}

std::optional<std::pair<double, double>> World::nearest_surface(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  double reflectivity = 0.0;

  const double wall_d[6] = {p.x(),
                            config_.tank_m.x() - p.x(),
                            p.y(),
                            config_.tank_m.y() - p.y(),
                            p.z(),
                            config_.tank_m.z() - p.z()};
  for (const double d : wall_d) {
    if (d >= 0.0 && d < best) {
      best = d;
      reflectivity = config_.wall_reflectivity;
    }
  }

  for (const auto& o : obstacles_) {
    // Perpendicular hits on each axis-aligned face; the foot must lie on the face.
    const bool in_y = p.y() >= o.min.y() && p.y() <= o.max.y();
    const bool in_z = p.z() >= o.min.z() && p.z() <= o.max.z();
    const bool in_x = p.x() >= o.min.x() && p.x() <= o.max.x();
    struct Face {
      bool applicable;
      double d;
    };
    const Face faces[6] = {
        {p.x() < o.min.x() && in_y && in_z, o.min.x() - p.x()},
        {p.x() > o.max.x() && in_y && in_z, p.x() - o.max.x()},
        {p.y() < o.min.y() && in_x && in_z, o.min.y() - p.y()},
        {p.y() > o.max.y() && in_x && in_z, p.y() - o.max.y()},
        {p.z() < o.min.z() && in_x && in_y, o.min.z() - p.z()},
        {p.z() > o.max.z() && in_x && in_y, p.z() - o.max.z()},
    };
    for (const auto& f : faces) {
      if (f.applicable && f.d < best) {
        best = f.d;
        reflectivity = o.reflectivity;
      }
    }
  }

  if (!std::isfinite(best)) return std::nullopt;
  return std::make_pair(best, reflectivity);
}

std::optional<EchoResult> World::echo(const protocol::Packet& packet) const {
  const RobotState* sender = find_robot(packet.sender);
  if (sender == nullptr) raise(ErrorCode::InvalidArgument, "packet sender is not in the world");
  const auto& chan = channel_by_name(packet.channel);

  const auto surface = nearest_surface(sender->position);
  if (!surface) return std::nullopt;
  const auto [d, reflectivity] = *surface;
  if (reflectivity <= 0.0) return std::nullopt;  // black body never echoes

  const double round_trip_db = channel::path_loss_db(chan, 2.0 * d);
  const double received = packet.tx_power_db - round_trip_db + 10.0 * std::log10(reflectivity);
  const auto tc = sender->transceivers.find(packet.channel);
  const double sensitivity = tc != sender->transceivers.end() ? tc->second.sensitivity_db : 0.0;
  if (received < sensitivity) return std::nullopt;

  EchoResult result;
  result.packet = packet;
  result.delay_s = chan.carrier == channel::Carrier::Sonar ? 2.0 * d / kSonarSpeedMS : 0.0;
  result.received_db = received;
  result.surface_distance_m = d;
  return result;
}

double World::aggregate_intensity(const Vec3& at, const channel::ChannelModel& chan,
                                  std::optional<protocol::RobotId> exclude) const {
  if (config_.analog.empty() || chan.name != config_.analog) {
    raise(ErrorCode::InvalidArgument, "aggregate_intensity needs the configured analog channel");
  }
  double total = 0.0;
  for (const auto& robot : robots_) {
    if (exclude && robot.id == *exclude) continue;
    if (robot.docked) continue;
    const auto tc = robot.transceivers.find(chan.name);
    if (tc == robot.transceivers.end() || !tc->second.analog_emit) continue;
    const double d = uwsc::distance(robot.position, at);
    const double rx_db = channel::received_intensity_db(chan, tc->second.tx_power_db, d);
    total += std::pow(10.0, rx_db / 10.0);  // dB to linear happens only here
  }
  return total;
}

void World::emit_duty_cycle(double t_s, std::vector<protocol::Packet>& out) {
  for (auto& robot : robots_) {
    if (robot.docked) continue;
    // One burst per duty period, fired at the first tick after the send
    // window opens. Windows narrower than a tick still transmit; the tick
    // quantizes when, not whether.
    const long window = static_cast<long>(
        std::floor((t_s - robot.duty.phase_offset_s) / robot.duty.period_s));
    if (window <= robot.last_send_window) continue;
    robot.last_send_window = window;

    const auto tx = robot.transceivers.at(config_.digital).tx_power_db;
    protocol::Packet beacon{protocol::PacketKind::IdBeacon, robot.id, 0.0, config_.digital, tx, t_s};
    protocol::Packet energy{protocol::PacketKind::EnergyValue, robot.id, robot.energy,
                            config_.digital, tx, t_s};
    out.push_back(beacon);
    out.push_back(energy);
    if (config_.active_sensing && robot.sensing.phase == protocol::SensingPhase::Ranging) {
      out.push_back(protocol::Packet{protocol::PacketKind::SensingProbe, robot.id,
                                     static_cast<double>(robot.sensing.sensitivity_level),
                                     config_.digital, tx, t_s});
    }
    robot.sent_since_heard = true;
  }
  metrics_.packets_sent += static_cast<long>(out.size());
}

void World::feed_sensing_event(RobotState& robot, const protocol::SensingEvent& event, double t_s) {
  const auto before = robot.sensing;
  const auto after = protocol::active_sensing_step(before, event, ladder_,
                                                   channel_by_name(config_.digital));
  trace_.push_back(protocol::trace_line(t_s, robot.id,
                                        protocol::sensing_phase_name(before.phase),
                                        protocol::sensing_event_name(event),
                                        protocol::sensing_phase_name(after.phase)));
  if (before.phase == protocol::SensingPhase::Ranging &&
      after.phase == protocol::SensingPhase::Cooperation && after.peer &&
      after.distance_estimate_m) {
    robot.cooperation_since_s = t_s;
    if (const RobotState* peer = find_robot(*after.peer)) {
      const double truth = uwsc::distance(robot.position, peer->position);
      metrics_.ranging_errors_m.push_back(std::abs(*after.distance_estimate_m - truth));
    }
  }
  if (after.phase == protocol::SensingPhase::Discovery &&
      before.phase != protocol::SensingPhase::Discovery) {
    robot.heard_peer.reset();
    robot.sent_since_heard = false;
  }
  robot.sensing = after;
}

void World::apply_reception(RobotState& robot, const protocol::Packet& packet, double t_s) {
  const auto classified = protocol::interpret_reception(robot.id, packet);

  if (classified.kind == protocol::ReceptionKind::Echo) {
    metrics_.echo_events.push_back(EchoEvent{t_s, robot.id.value, packet.sender.value});
    trace_.push_back(protocol::trace_line(
        t_s, robot.id, protocol::sensing_phase_name(robot.sensing.phase),
        "recv:echo(" + std::to_string(packet.sender.value) + ")",
        protocol::sensing_phase_name(robot.sensing.phase)));
    return;
  }

  // Neighbor packet.
  if (packet.kind == protocol::PacketKind::EnergyValue) {
    robot.arbitration.neighbor_energies[packet.sender.value] =
        protocol::NeighborEnergy{packet.payload, t_s};
    robot.last_fresh_info_s = t_s;
    return;  // energy bookkeeping is not traced; decisions are
  }

  if (packet.kind == protocol::PacketKind::IdBeacon) {
    trace_.push_back(protocol::trace_line(
        t_s, robot.id, protocol::sensing_phase_name(robot.sensing.phase),
        "recv:neighbor(" + std::to_string(packet.sender.value) + ")",
        protocol::sensing_phase_name(robot.sensing.phase)));
  }

  if (!config_.active_sensing) return;

  if (robot.sensing.phase == protocol::SensingPhase::Discovery &&
      packet.kind == protocol::PacketKind::IdBeacon) {
    const bool complete = robot.heard_peer && *robot.heard_peer == packet.sender &&
                          robot.sent_since_heard;
    feed_sensing_event(robot, protocol::ReceptionEvent{classified, complete}, t_s);
    if (!complete) {
      robot.heard_peer = packet.sender;
      robot.sent_since_heard = false;
    } else {
      robot.last_peer_heard_s = t_s;
    }
    return;
  }

  if (robot.sensing.phase == protocol::SensingPhase::Ranging && robot.sensing.peer &&
      *robot.sensing.peer == packet.sender) {
    // Heard the peer at the current rung of the sensitivity ladder. A burst
    // carries several packets but was audible at one rung, so it acks once.
    if (robot.last_peer_heard_s == t_s) return;
    robot.last_peer_heard_s = t_s;
    feed_sensing_event(robot, protocol::AckEvent{}, t_s);
  }
}

void World::update_arbitration(double t_s) {
  for (auto& robot : robots_) {
    const auto decision =
        protocol::arbitration_decide(robot.arbitration, config_.staleness_limit_s(), t_s);
    if (decision != robot.arbitration.decision) {
      trace_.push_back(protocol::trace_line(
          t_s, robot.id, protocol::decision_name(robot.arbitration.decision),
          "decide", protocol::decision_name(decision)));
      if (decision == protocol::Decision::Ascend) ++metrics_.ascent_counts[robot.id.value];
      robot.arbitration.decision = decision;
    }
  }
}

void World::integrate_motion(double t_s) {
  const double dt = config_.tick_s;
  const bool has_analog = !config_.analog.empty();
  const channel::ChannelModel* analog_chan =
      has_analog ? &channel_by_name(config_.analog) : nullptr;

  for (auto& robot : robots_) {
    if (robot.docked) {
      robot.energy = std::min(1.0, robot.energy + station_->recharge_per_s * dt);
      robot.arbitration.own_energy = robot.energy;
      if (robot.energy >= 1.0) {
        robot.docked = false;
        station_->occupant.reset();
        trace_.push_back(protocol::trace_line(
            t_s, robot.id, protocol::decision_name(robot.arbitration.decision), "undock",
            protocol::decision_name(robot.arbitration.decision)));
      }
      continue;
    }

    const bool hungry = robot.energy < robot.arbitration.recharge_threshold;
    const auto decision = hungry ? robot.arbitration.decision : protocol::Decision::Descend;
    const bool uncontended = hungry &&
                             robot.arbitration.decision == protocol::Decision::Undecided &&
                             (t_s - robot.last_fresh_info_s) >= config_.staleness_limit_s();

    double ambient = 0.0;
    if (has_analog) {
      ambient = aggregate_intensity(robot.position, *analog_chan, robot.id);
      if (ambient >= config_.ambient_threshold) ++metrics_.ambient_detections;
    }
    double drive;
    if (has_analog) {
      const double readings[1] = {ambient};
      drive = protocol::blue_gradient_response(readings, decision, config_.pressure_saturation);
    } else {
      drive = decision == protocol::Decision::Ascend ? 1.0 : 0.0;
    }
    if (uncontended) drive = 1.0;  // hungry, nobody in earshot: the station is free game

    robot.vertical_velocity_m_s = drive * config_.max_vertical_speed_m_s;
    robot.position.z() = clamp(robot.position.z() + robot.vertical_velocity_m_s * dt, kWallMargin,
                               config_.tank_m.z() - kWallMargin);
    if (config_.horizontal_drift_m_s > 0.0) {
      robot.position.x() = clamp(robot.position.x() + rng_.gaussian(config_.horizontal_drift_m_s) * dt,
                                 kWallMargin, config_.tank_m.x() - kWallMargin);
      robot.position.y() = clamp(robot.position.y() + rng_.gaussian(config_.horizontal_drift_m_s) * dt,
                                 kWallMargin, config_.tank_m.y() - kWallMargin);
    }
    robot.energy = std::max(0.0, robot.energy - robot.energy_drain_per_s * dt);
    robot.arbitration.own_energy = robot.energy;

    const double horizontal_gap =
        station_ ? std::hypot(robot.position.x() - station_->position.x(),
                              robot.position.y() - station_->position.y())
                 : 0.0;
    if (station_ && !station_->occupant && hungry &&
        (robot.arbitration.decision == protocol::Decision::Ascend || uncontended) &&
        horizontal_gap <= station_->radius_m &&
        std::abs(robot.position.z() - station_->position.z()) <= station_->z_tolerance_m) {
      robot.docked = true;
      station_->occupant = robot.id;
      robot.position = station_->position;
      DockingEvent event;
      event.t_s = t_s;
      event.robot = robot.id.value;
      event.energy = robot.energy;
      for (const auto& [id, entry] : robot.arbitration.neighbor_energies) {
        if (t_s - entry.timestamp_s <= config_.staleness_limit_s()) {
          event.fresh_neighbor_energies.emplace_back(id, entry.energy);
        }
      }
      metrics_.dockings.push_back(std::move(event));
      trace_.push_back(protocol::trace_line(
          t_s, robot.id, protocol::decision_name(robot.arbitration.decision), "dock",
          protocol::decision_name(robot.arbitration.decision)));
    }
  }
}

void World::record_series(double t_s) {
  while (next_series_s_ <= t_s + kTimeEps) {
    for (const auto& robot : robots_) {
      metrics_.series.push_back(SeriesSample{next_series_s_, robot.id.value,
                                             robot.position.z(), robot.energy});
    }
    next_series_s_ += config_.metrics_interval_s;
  }
}

void World::step() {
  const double t = clock_s_ + config_.tick_s;

  struct Reception {
    double t_s;
    std::uint64_t sequence;
    protocol::RobotId receiver;
    protocol::Packet packet;
  };
  std::vector<Reception> receptions;

  // Due scheduled deliveries (sonar latency, delayed echoes).
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const ScheduledDelivery& a, const ScheduledDelivery& b) {
                     return a.due_s != b.due_s ? a.due_s < b.due_s : a.sequence < b.sequence;
                   });
  std::size_t due = 0;
  while (due < pending_.size() && pending_[due].due_s <= t + kTimeEps) {
    const auto& d = pending_[due];
    receptions.push_back(Reception{d.due_s, d.sequence, d.receiver, d.packet});
    ++due;
  }
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(due));

  // Cooperation dwell: re-open discovery after the configured number of periods.
  if (config_.active_sensing) {
    for (auto& robot : robots_) {
      if (robot.sensing.phase == protocol::SensingPhase::Cooperation &&
          t - robot.cooperation_since_s >= config_.resense_periods * config_.duty_period_s) {
        trace_.push_back(protocol::trace_line(t, robot.id, "Cooperation", "resense", "Discovery"));
        robot.sensing = protocol::ActiveSensingState{};
        robot.heard_peer.reset();
        robot.sent_since_heard = false;
      }
    }
  }

  // Duty-cycle transmissions, contention, echoes.
  std::vector<protocol::Packet> batch;
  emit_duty_cycle(t, batch);
  if (!batch.empty()) {
    for (const auto& outcome : deliver(batch)) {
      switch (outcome.status) {
        case DeliveryStatus::Delivered:
          ++metrics_.packets_delivered;
          if (outcome.latency_s > 0.0) {
            pending_.push_back(ScheduledDelivery{t + outcome.latency_s, sequence_++,
                                                 outcome.receiver, outcome.packet});
          } else {
            receptions.push_back(Reception{t, sequence_++, outcome.receiver, outcome.packet});
          }
          break;
        case DeliveryStatus::Collided:
          ++metrics_.packets_collided;
          break;
        case DeliveryStatus::OutOfRange:
          ++metrics_.packets_out_of_range;
          break;
      }
    }
    for (const auto& p : batch) {
      if (const auto result = echo(p)) {
        if (result->delay_s > 0.0) {
          pending_.push_back(ScheduledDelivery{t + result->delay_s, sequence_++, p.sender,
                                               result->packet});
        } else {
          receptions.push_back(Reception{t, sequence_++, p.sender, result->packet});
        }
      }
    }
  }

  std::stable_sort(receptions.begin(), receptions.end(), [](const Reception& a, const Reception& b) {
    return a.t_s != b.t_s ? a.t_s < b.t_s : a.sequence < b.sequence;
  });
  for (const auto& r : receptions) {
    if (RobotState* robot = find_robot(r.receiver)) {
      apply_reception(*robot, r.packet, t);
    }
  }

  // Ranging timeout: a full quiet stretch at the current rung ends the sweep.
  if (config_.active_sensing) {
    for (auto& robot : robots_) {
      if (robot.sensing.phase == protocol::SensingPhase::Ranging &&
          t - robot.last_peer_heard_s > config_.ranging_timeout_periods * config_.duty_period_s) {
        robot.last_peer_heard_s = t;  // restart the quiet clock in whatever state follows
        feed_sensing_event(robot, protocol::TimeoutEvent{}, t);
      }
    }
  }

  update_arbitration(t);
  integrate_motion(t);

  clock_s_ = t;
  record_series(t);
}

void World::run() {
  while (clock_s_ + kTimeEps < config_.horizon_s) {
    step();
  }
  metrics_.final_energies.clear();
  for (const auto& robot : robots_) metrics_.final_energies.push_back(robot.energy);
}

Metrics run_scenario(const ScenarioConfig& config, Seed seed) {
  World world(config, seed);
  world.run();
  return world.metrics();
}

}  // namespace uwsc::sim
