#include "uwsc/protocol.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace uwsc;
using namespace uwsc::protocol;

namespace {

const channel::ChannelModel& blue() {
  return channel::find_channel(channel::builtin_channels(), "blue");
}

SensitivityLadder blue_ladder() {
  SensitivityLadder ladder;
  ladder.tx_power_db = blue().link_budget_db;  // 1.2 dB
  ladder.floor_db = 0.0;
  ladder.levels = 16;
  return ladder;
}

// Independent sweep oracle: enumerate the ladder's distances and find the
// bracket that contains the true distance.
double sweep_bracket_upper(const SensitivityLadder& ladder, const channel::ChannelModel& chan,
                           double true_d) {
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < ladder.levels; ++level) {
    const double d = (ladder.tx_power_db - ladder.threshold_db(level)) / chan.attenuation_db_per_m;
    if (d >= true_d) best = std::min(best, d);
  }
  return best;
}

// Drives the state machine against a noiseless channel at distance true_d:
// an ack is exactly "the peer is still audible at the current rung".
ActiveSensingState run_sweep(double true_d, const SensitivityLadder& ladder,
                             const channel::ChannelModel& chan, int* events_out = nullptr) {
  ActiveSensingState st;
  int events = 0;
  // Mutual ID exchange: first contact, then the confirming beacon.
  st = active_sensing_step(st, ReceptionEvent{{ReceptionKind::Neighbor, RobotId{5}}, false},
                           ladder, chan);
  ++events;
  st = active_sensing_step(st, ReceptionEvent{{ReceptionKind::Neighbor, RobotId{5}}, true},
                           ladder, chan);
  ++events;
  while (st.phase == SensingPhase::Ranging) {
    const double rx = channel::received_intensity_db(chan, ladder.tx_power_db, true_d);
    const bool audible = rx >= ladder.threshold_db(st.sensitivity_level);
    st = active_sensing_step(st, audible ? SensingEvent{AckEvent{}} : SensingEvent{TimeoutEvent{}},
                             ladder, chan);
    ++events;
    if (events > 100) break;
  }
  if (events_out != nullptr) *events_out = events;
  return st;
}

}  // namespace

int main() {
  uwsc_test::Suite suite;

  suite.add("duty_cycle_slot_boundaries", [](uwsc_test::Runner& t) {
    DutyCycle dc;
    dc.period_s = 2.0;
    dc.phase_offset_s = 0.0;
    t.check(duty_cycle_slot(dc, 0.0) == Slot::Send, "period start sends");
    t.check(duty_cycle_slot(dc, 0.09) == Slot::Send, "inside the 5% window");
    t.check(duty_cycle_slot(dc, 0.1) == Slot::Listen, "window closes at 5%");
    t.check(duty_cycle_slot(dc, 1.99) == Slot::Listen, "late period listens");
    t.check(duty_cycle_slot(dc, 2.0) == Slot::Send, "next period sends again");
    DutyCycle shifted = dc;
    shifted.phase_offset_s = 0.5;
    t.check(duty_cycle_slot(shifted, 0.5) == Slot::Send, "offset shifts the window");
    t.check(duty_cycle_slot(shifted, 0.0) == Slot::Listen, "origin no longer sends");

    DutyCycle lopsided = dc;
    lopsided.send_fraction = 0.2;  // fractions no longer sum to 1
    t.check_throws(ErrorCode::InvalidArgument, [&] { duty_cycle_slot(lopsided, 0.0); },
                   "fraction invariant enforced");
  });

  suite.add("duty_cycle_measure", [](uwsc_test::Runner& t) {
    DutyCycle dc;
    dc.period_s = 2.0;
    dc.phase_offset_s = 0.731;
    Rng rng(Seed{51});
    long sends = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) {
      if (duty_cycle_slot(dc, rng.uniform(0.0, 1000.0)) == Slot::Send) ++sends;
    }
    const double fraction = static_cast<double>(sends) / static_cast<double>(n);
    t.check_close(fraction, 0.05, 0.002, "send measure is 5%");
  });

  suite.add("duty_cycle_offsets_decorrelate", [](uwsc_test::Runner& t) {
    DutyCycle a;
    a.period_s = 2.0;
    a.phase_offset_s = 0.0;
    DutyCycle b = a;
    b.phase_offset_s = 1.0;
    bool found_disjoint = false;
    for (double at = 0.0; at < 2.0; at += 0.01) {
      if (duty_cycle_slot(a, at) == Slot::Send && duty_cycle_slot(b, at) != Slot::Send) {
        found_disjoint = true;
        break;
      }
    }
    t.check(found_disjoint, "offset robots are not always simultaneously sending");
  });

  suite.add("interpret_reception_rules", [](uwsc_test::Runner& t) {
    Packet from7{PacketKind::IdBeacon, RobotId{7}, 0.0, "ir-pcm", 5.0, 0.0};
    const auto neighbor = interpret_reception(RobotId{3}, from7);
    t.check(neighbor.kind == ReceptionKind::Neighbor && neighbor.peer &&
                neighbor.peer->value == 7,
            "another-than-own id is a neighbor");

    Packet own{PacketKind::IdBeacon, RobotId{3}, 0.0, "ir-pcm", 5.0, 0.0};
    t.check(interpret_reception(RobotId{3}, own).kind == ReceptionKind::Echo,
            "own id came back off something passive");

    t.check(interpret_reception(RobotId{3}, UnmodulatedLight{0.4}).kind ==
                ReceptionKind::AmbientLight,
            "raw light is ambient");
  });

  suite.add("sensitivity_ladder_shape", [](uwsc_test::Runner& t) {
    const auto ladder = blue_ladder();
    t.check_close(ladder.threshold_db(0), ladder.tx_power_db, 1e-12, "level 0 at tx power");
    t.check_close(ladder.threshold_db(ladder.top_level()), 0.0, 1e-12,
                  "top level at the detection floor");
    for (int k = 0; k + 1 < ladder.levels; ++k) {
      if (!t.check(ladder.threshold_db(k) > ladder.threshold_db(k + 1),
                   "thresholds strictly descend")) {
        return;
      }
    }
    // Linear in dB means evenly spaced distances.
    const double gap = ladder_gap_m(ladder, blue());
    t.check_close(gap, 1.2 / 15.0, 1e-12, "uniform 8 cm distance steps");
  });

  suite.add("sensitivity_to_distance_examples", [](uwsc_test::Runner& t) {
    t.check_close(sensitivity_to_distance(blue().link_budget_db, blue(), blue().link_budget_db),
                  0.0, 0.0, "threshold at tx power detects only at contact");
    t.check_close(sensitivity_to_distance(0.0, blue(), 1.2), 1.2, 1e-12,
                  "floor threshold reaches full range");
    const double d_low = sensitivity_to_distance(0.3, blue(), 1.2);
    const double d_high = sensitivity_to_distance(0.9, blue(), 1.2);
    t.check(d_low > d_high, "lower threshold hears farther");
    t.check_throws(ErrorCode::OutOfRange, [] { sensitivity_to_distance(2.0, blue(), 1.2); },
                   "threshold above tx power");
  });

  suite.add("active_sensing_discovery", [](uwsc_test::Runner& t) {
    const auto ladder = blue_ladder();
    ActiveSensingState st;

    const auto still = active_sensing_step(
        st, ReceptionEvent{{ReceptionKind::Neighbor, RobotId{5}}, false}, ladder, blue());
    t.check(still.phase == SensingPhase::Discovery, "half-done exchange stays in discovery");

    const auto ranging = active_sensing_step(
        st, ReceptionEvent{{ReceptionKind::Neighbor, RobotId{5}}, true}, ladder, blue());
    t.check(ranging.phase == SensingPhase::Ranging, "complete exchange starts ranging");
    t.check(ranging.peer && ranging.peer->value == 5, "peer recorded");
    t.check(ranging.sensitivity_level == ladder.top_level(), "sweep starts fully sensitive");

    const auto iterate = active_sensing_step(st, TimeoutEvent{}, ladder, blue());
    t.check(iterate.phase == SensingPhase::Discovery, "timeout iterates discovery");

    const auto echoed = active_sensing_step(
        st, ReceptionEvent{{ReceptionKind::Echo, RobotId{3}}, false}, ladder, blue());
    t.check(echoed.phase == SensingPhase::Discovery, "echoes do not advance discovery");

    t.check_throws(ErrorCode::ProtocolViolation,
                   [&] { active_sensing_step(st, AckEvent{}, ladder, blue()); },
                   "ack is impossible in discovery");
  });

  suite.add("active_sensing_ranging", [](uwsc_test::Runner& t) {
    const auto ladder = blue_ladder();
    ActiveSensingState st;
    st.phase = SensingPhase::Ranging;
    st.peer = RobotId{5};
    st.sensitivity_level = 10;

    const auto acked = active_sensing_step(st, AckEvent{}, ladder, blue());
    t.check(acked.phase == SensingPhase::Ranging && acked.sensitivity_level == 9,
            "ack decrements the level");

    const auto done = active_sensing_step(st, TimeoutEvent{}, ladder, blue());
    t.check(done.phase == SensingPhase::Cooperation, "silence ends the sweep");
    const double expected =
        sensitivity_to_distance(ladder.threshold_db(11), blue(), ladder.tx_power_db);
    t.check(done.distance_estimate_m && *done.distance_estimate_m == expected,
            "estimate comes from the last level that heard");

    ActiveSensingState top = st;
    top.sensitivity_level = ladder.top_level();
    const auto lost = active_sensing_step(top, TimeoutEvent{}, ladder, blue());
    t.check(lost.phase == SensingPhase::Discovery, "silent at full sensitivity: peer lost");
    t.check(!lost.peer, "peer cleared");

    ActiveSensingState closest = st;
    closest.sensitivity_level = 0;
    const auto contact = active_sensing_step(closest, AckEvent{}, ladder, blue());
    t.check(contact.phase == SensingPhase::Cooperation &&
                contact.distance_estimate_m && *contact.distance_estimate_m == 0.0,
            "audible at the least sensitive rung means contact range");
  });

  suite.add("active_sensing_cooperation_terminal", [](uwsc_test::Runner& t) {
    const auto ladder = blue_ladder();
    ActiveSensingState st;
    st.phase = SensingPhase::Cooperation;
    st.peer = RobotId{5};
    st.distance_estimate_m = 0.4;
    t.check_throws(ErrorCode::ProtocolViolation,
                   [&] { active_sensing_step(st, TimeoutEvent{}, ladder, blue()); },
                   "cooperation accepts no further events");
  });

  suite.add("sweep_quantization_bound", [](uwsc_test::Runner& t) {
    const auto ladder = blue_ladder();
    const double gap = ladder_gap_m(ladder, blue());
    Rng rng(Seed{52});
    for (int i = 0; i < 200; ++i) {
      const double true_d = rng.uniform(1e-6, 1.2);
      const auto st = run_sweep(true_d, ladder, blue());
      if (!t.check(st.phase == SensingPhase::Cooperation, "sweep terminates")) return;
      if (!t.check(st.distance_estimate_m.has_value(), "estimate set")) return;
      const double err = std::abs(*st.distance_estimate_m - true_d);
      if (!t.check(err <= gap + 1e-12, "within one ladder gap (err " + std::to_string(err) + ")")) {
        return;
      }
      // Cross-check against the independent bracket oracle.
      const double upper = sweep_bracket_upper(ladder, blue(), true_d);
      if (!t.check_close(*st.distance_estimate_m, upper, 1e-12, "matches the bracket oracle")) {
        return;
      }
    }
  });

  suite.add("sweep_liveness_bound", [](uwsc_test::Runner& t) {
    const auto ladder = blue_ladder();
    const int bound = 2 + ladder.levels + 2;  // handshake + full sweep + slack
    Rng rng(Seed{53});
    for (int i = 0; i < 100; ++i) {
      int events = 0;
      const auto st = run_sweep(rng.uniform(0.01, 1.19), ladder, blue(), &events);
      if (!t.check(st.phase == SensingPhase::Cooperation, "cooperation reached")) return;
      if (!t.check(events <= bound, "bounded number of events")) return;
    }
  });

  suite.add("arbitration_examples", [](uwsc_test::Runner& t) {
    ArbitrationState st;
    st.id = RobotId{1};
    st.own_energy = 0.2;
    st.neighbor_energies[2] = {0.5, 10.0};
    st.neighbor_energies[3] = {0.8, 10.0};
    t.check(arbitration_decide(st, 5.0, 11.0) == Decision::Ascend, "hungriest robot ascends");

    ArbitrationState loser;
    loser.id = RobotId{1};
    loser.own_energy = 0.5;
    loser.neighbor_energies[2] = {0.2, 10.0};
    t.check(arbitration_decide(loser, 5.0, 11.0) == Decision::Descend,
            "someone hungrier is around");

    ArbitrationState tie;
    tie.id = RobotId{1};
    tie.own_energy = 0.3;
    tie.neighbor_energies[2] = {0.3, 10.0};
    t.check(arbitration_decide(tie, 5.0, 11.0) == Decision::Ascend, "tie broken by lower id");
    ArbitrationState tie_hi;
    tie_hi.id = RobotId{3};
    tie_hi.own_energy = 0.3;
    tie_hi.neighbor_energies[2] = {0.3, 10.0};
    t.check(arbitration_decide(tie_hi, 5.0, 11.0) == Decision::Descend,
            "tie lost by the higher id");
  });

  suite.add("arbitration_staleness", [](uwsc_test::Runner& t) {
    ArbitrationState st;
    st.id = RobotId{1};
    st.own_energy = 0.5;
    st.recharge_threshold = 0.6;
    st.neighbor_energies[2] = {0.2, 1.0};  // hungrier, but long silent
    t.check(arbitration_decide(st, 5.0, 20.0) == Decision::Undecided,
            "stale entries ignored, hungry with no fresh info");
    t.check(arbitration_decide(st, 5.0, 5.5) == Decision::Descend, "fresh entry counts");

    ArbitrationState full;
    full.id = RobotId{1};
    full.own_energy = 0.9;
    full.recharge_threshold = 0.3;
    t.check(arbitration_decide(full, 5.0, 1.0) == Decision::Descend,
            "no info and not hungry defaults down");
  });

  suite.add("arbitration_uniqueness_brute_force", [](uwsc_test::Runner& t) {
    // Every ordering of distinct energies for groups of 2..6 robots with full
    // fresh knowledge: exactly one Ascend, and it is the minimum (checked by
    // independent scan).
    for (int n = 2; n <= 6; ++n) {
      std::vector<int> ranks(static_cast<std::size_t>(n));
      std::iota(ranks.begin(), ranks.end(), 0);
      const double energy_of[6] = {0.12, 0.27, 0.44, 0.58, 0.73, 0.91};
      do {
        std::vector<double> energies(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          energies[static_cast<std::size_t>(i)] = energy_of[ranks[static_cast<std::size_t>(i)]];
        }
        int ascends = 0;
        int ascender = -1;
        for (int i = 0; i < n; ++i) {
          ArbitrationState st;
          st.id = RobotId{static_cast<std::uint32_t>(i)};
          st.own_energy = energies[static_cast<std::size_t>(i)];
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            st.neighbor_energies[static_cast<std::uint32_t>(j)] = {
                energies[static_cast<std::size_t>(j)], 10.0};
          }
          if (arbitration_decide(st, 5.0, 10.5) == Decision::Ascend) {
            ++ascends;
            ascender = i;
          }
        }
        // Independent minimum oracle.
        int min_index = 0;
        for (int i = 1; i < n; ++i) {
          if (energies[static_cast<std::size_t>(i)] < energies[static_cast<std::size_t>(min_index)]) {
            min_index = i;
          }
        }
        if (!t.check(ascends == 1, "exactly one ascender")) return;
        if (!t.check(ascender == min_index, "the minimum ascends")) return;
      } while (std::next_permutation(ranks.begin(), ranks.end()));
    }
  });

  suite.add("arbitration_no_ghost_ascent", [](uwsc_test::Runner& t) {
    Rng rng(Seed{54});
    for (int i = 0; i < 2000; ++i) {
      ArbitrationState st;
      st.id = RobotId{static_cast<std::uint32_t>(rng.next_below(8))};
      st.own_energy = rng.uniform(0.0, 1.0);
      const int neighbors = 1 + static_cast<int>(rng.next_below(5));
      const double now = 100.0;
      const double staleness = 10.0;
      for (int j = 0; j < neighbors; ++j) {
        const auto id = static_cast<std::uint32_t>(10 + j);
        st.neighbor_energies[id] = {rng.uniform(0.0, 1.0), now - rng.uniform(0.0, 30.0)};
      }
      if (arbitration_decide(st, staleness, now) != Decision::Ascend) continue;
      for (const auto& [id, e] : st.neighbor_energies) {
        const bool fresh = now - e.timestamp_s <= staleness;
        if (!t.check(!(fresh && e.energy < st.own_energy),
                     "never ascend past a fresh hungrier neighbor")) {
          return;
        }
      }
    }
  });

  suite.add("blue_gradient_response", [](uwsc_test::Runner& t) {
    const double none[1] = {0.0};
    t.check_close(blue_gradient_response(none, Decision::Descend), 0.0, 0.0,
                  "no light, no pressure");
    double previous = 0.0;
    for (double intensity = 0.1; intensity <= 2.0; intensity += 0.1) {
      const double readings[1] = {intensity};
      const double drive = blue_gradient_response(readings, Decision::Descend, 1.5);
      if (!t.check(drive <= previous, "more light pushes harder down")) return;
      if (!t.check(drive >= -1.0, "drive clamped")) return;
      previous = drive;
    }
    const double bright[2] = {5.0, 3.0};
    t.check_close(blue_gradient_response(bright, Decision::Descend, 1.0), -1.0, 0.0,
                  "saturates at full descent");
    t.check_close(blue_gradient_response(bright, Decision::Ascend, 1.0), 1.0, 0.0,
                  "the hungry robot overrides the pressure");
  });

  suite.add("trace_line_format", [](uwsc_test::Runner& t) {
    const auto line = trace_line(12.3456, RobotId{3}, "Discovery", "recv:neighbor(5)", "Ranging");
    t.check(line == "12.346 3 Discovery recv:neighbor(5) Ranging", "frozen five-field format");
  });

  return suite.run();
}
