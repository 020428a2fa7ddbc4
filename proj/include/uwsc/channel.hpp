// Physical channel models: per-meter attenuation, link budgets, communication
// ranges, the measured underwater modulation table, and the swarm locality
// classification.
#pragma once

#include "uwsc/core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uwsc::channel {

enum class Carrier { Sonar, Radio, Optical, EField };

const char* carrier_name(Carrier c);
Carrier carrier_from_name(std::string_view name);  // throws ConfigError

/// One named physical channel. Intensities are dB relative to a unit
/// reference; the detection floor is 0 dB, so a transmitter driven at
/// tx_power == link_budget_db is heard exactly out to max_range_m.
struct ChannelModel {
  std::string name;
  Carrier carrier = Carrier::Optical;
  double frequency_or_wavelength = 0.0;  // Hz for sonar/radio/efield, nm for optical
  double attenuation_db_per_m = 0.0;     // > 0
  double link_budget_db = 0.0;           // > 0
  double antenna_size_m = 0.0;           // informational
};

/// Loss over a straight path of d meters: attenuation * d.
double path_loss_db(const ChannelModel& channel, double d_m);

/// Distance at which path loss exhausts the link budget.
double max_range_m(const ChannelModel& channel);

/// tx_power_db minus path loss, same dB-referenced unit as tx_power_db.
double received_intensity_db(const ChannelModel& channel, double tx_power_db, double d_m);

/// Local communication radius for N robots occupying v_sw cubic meters:
/// the radius whose sphere takes an equal share of the swarm volume.
double local_comm_radius_m(double v_sw_m3, int count);

enum class RangeClass { Local, Intermediate, Global };

const char* range_class_name(RangeClass c);

/// Local band is [0.5, 1.2] m, global is 3 m and beyond; the gap between the
/// bands is reported explicitly instead of being forced into either label.
RangeClass classify_range(double r_m);

/// Average swarm density and the communication volume that goes with a radius.
struct SwarmGeometry {
  double v_sw_m3 = 1.0;  // volume occupied by the AUVs, > 0
  int count = 1;         // robot count, >= 1

  double density_per_m3() const { return static_cast<double>(count) / v_sw_m3; }
  double comm_radius_m() const { return local_comm_radius_m(v_sw_m3, count); }
  double comm_volume_m3() const {
    const double r = comm_radius_m();
    return 4.0 / 3.0 * kPi * r * r * r;
  }
};

enum class Modulation { Direct, IrDA, TvRemote, Qam };
enum class Transducer { Infrared, BlueLed };

const char* modulation_name(Modulation m);
const char* transducer_name(Transducer t);

struct CmInterval {
  double lo_cm = 0.0;
  double hi_cm = 0.0;
};

/// One row of the measured 119 kbps underwater modulation comparison.
/// comm_range_cm is absent exactly where the measurement table has no entry;
/// sensing bands are kept verbatim as intervals without interpreting their
/// endpoints beyond lookup.
struct ModulationEntry {
  Modulation modulation = Modulation::Direct;
  Transducer transducer = Transducer::Infrared;
  std::optional<double> comm_range_cm;
  std::optional<CmInterval> sensing_band_cm;
};

/// The eight built-in channels (sonar, three radio bands, three optical
/// systems, electric field). Budgets are derived as attenuation * range so
/// max_range_m round-trips the table exactly.
const std::vector<ChannelModel>& builtin_channels();

/// Lookup by name in a channel set. Throws UnknownChannel.
const ChannelModel& find_channel(const std::vector<ChannelModel>& set, std::string_view name);

const std::vector<ModulationEntry>& builtin_modulation_table();

/// Measured range row for a modulation/transducer pair.
const ModulationEntry& modulation_range(Modulation m, Transducer t);

/// Name-based lookup ("qam", "blue-led", ...). Throws UnknownCombination for
/// names outside the table.
const ModulationEntry& modulation_range(std::string_view modulation, std::string_view transducer);

/// Applies a channel override file on top of a base set. One record per
/// channel:
///
///   [blue]
///   carrier = optical
///   frequency = 460
///   attenuation_db_per_m = 1.0
///   range_m = 1.2
///
/// Unknown sections create new channels; unknown keys are rejected with a
/// ConfigError naming the offending line.
std::vector<ChannelModel> apply_channel_overrides(std::vector<ChannelModel> base, std::istream& in);
std::vector<ChannelModel> load_channel_overrides(std::vector<ChannelModel> base, const std::string& path);

}  // namespace uwsc::channel
