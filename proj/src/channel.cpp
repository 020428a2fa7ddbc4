#include "uwsc/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uwsc::channel {

const char* carrier_name(Carrier c) {
  switch (c) {
    case Carrier::Sonar: return "sonar";
    case Carrier::Radio: return "radio";
    case Carrier::Optical: return "optical";
    case Carrier::EField: return "efield";
  }
  return "?";
}

Carrier carrier_from_name(std::string_view name) {
  if (name == "sonar") return Carrier::Sonar;
  if (name == "radio") return Carrier::Radio;
  if (name == "optical") return Carrier::Optical;
  if (name == "efield") return Carrier::EField;
  raise(ErrorCode::ConfigError, "unknown carrier '" + std::string(name) + "'");
}

double path_loss_db(const ChannelModel& channel, double d_m) {
  if (d_m < 0.0) raise(ErrorCode::InvalidArgument, "negative distance");
  return channel.attenuation_db_per_m * d_m;
}

double max_range_m(const ChannelModel& channel) {
  return channel.link_budget_db / channel.attenuation_db_per_m;
}

double received_intensity_db(const ChannelModel& channel, double tx_power_db, double d_m) {
  return tx_power_db - path_loss_db(channel, d_m);
}

double local_comm_radius_m(double v_sw_m3, int count) {
  if (v_sw_m3 <= 0.0) raise(ErrorCode::InvalidArgument, "swarm volume must be positive");
  if (count < 1) raise(ErrorCode::InvalidArgument, "robot count must be at least 1");
  return std::cbrt(v_sw_m3 / (count * 4.0 / 3.0 * kPi));
}

const char* range_class_name(RangeClass c) {
  switch (c) {
    case RangeClass::Local: return "Local";
    case RangeClass::Intermediate: return "Intermediate";
    case RangeClass::Global: return "Global";
  }
  return "?";
}

RangeClass classify_range(double r_m) {
  if (r_m <= 0.0) raise(ErrorCode::InvalidArgument, "range must be positive");
  if (r_m >= 0.5 && r_m <= 1.2) return RangeClass::Local;
  if (r_m >= 3.0) return RangeClass::Global;
  return RangeClass::Intermediate;
}

namespace {

ChannelModel make_channel(std::string name, Carrier carrier, double freq, double attenuation,
                          double range_m, double antenna_m) {
  ChannelModel c;
  c.name = std::move(name);
  c.carrier = carrier;
  c.frequency_or_wavelength = freq;
  c.attenuation_db_per_m = attenuation;
  c.link_budget_db = attenuation * range_m;  // budget makes range an output
  c.antenna_size_m = antenna_m;
  return c;
}

}  // namespace

const std::vector<ChannelModel>& builtin_channels() {
  static const std::vector<ChannelModel> table = {
      make_channel("sonar", Carrier::Sonar, 30e3, 0.3, 300.0, 0.1),
      make_channel("radio-100khz", Carrier::Radio, 100e3, 1.0, 100.0, 100.0),
      make_channel("radio-1mhz", Carrier::Radio, 1e6, 4.0, 25.0, 10.0),
      make_channel("radio-100mhz", Carrier::Radio, 100e6, 40.0, 2.5, 0.1),
      make_channel("ir-unmod", Carrier::Optical, 800.0, 10.0, 0.25, 0.1),
      make_channel("ir-pcm", Carrier::Optical, 800.0, 10.0, 0.5, 0.1),
      make_channel("blue", Carrier::Optical, 460.0, 1.0, 1.2, 0.1),
      make_channel("efield", Carrier::EField, 2.5e3, 100.0, 1.0, 0.1),
  };
  return table;
}

const ChannelModel& find_channel(const std::vector<ChannelModel>& set, std::string_view name) {
  for (const auto& c : set) {
    if (c.name == name) return c;
  }
  raise(ErrorCode::UnknownChannel, "no channel named '" + std::string(name) + "'");
}

const char* modulation_name(Modulation m) {
  switch (m) {
    case Modulation::Direct: return "direct";
    case Modulation::IrDA: return "irda";
    case Modulation::TvRemote: return "tv-remote";
    case Modulation::Qam: return "qam";
  }
  return "?";
}

const char* transducer_name(Transducer t) {
  switch (t) {
    case Transducer::Infrared: return "infrared";
    case Transducer::BlueLed: return "blue-led";
  }
  return "?";
}

const std::vector<ModulationEntry>& builtin_modulation_table() {
  static const std::vector<ModulationEntry> table = {
      {Modulation::Direct, Transducer::Infrared, std::nullopt, std::nullopt},
      {Modulation::IrDA, Transducer::Infrared, 7.0, CmInterval{0.0, 5.0}},
      {Modulation::TvRemote, Transducer::Infrared, 5.0, CmInterval{0.0, 5.0}},
      {Modulation::Qam, Transducer::Infrared, 12.0, CmInterval{0.0, 5.0}},
      {Modulation::Direct, Transducer::BlueLed, 20.0, std::nullopt},
      {Modulation::IrDA, Transducer::BlueLed, 60.0, CmInterval{0.0, 5.0}},
      {Modulation::TvRemote, Transducer::BlueLed, 45.0, CmInterval{3.0, 8.0}},
      {Modulation::Qam, Transducer::BlueLed, 120.0, CmInterval{7.0, 12.0}},
  };
  return table;
}

const ModulationEntry& modulation_range(Modulation m, Transducer t) {
  for (const auto& e : builtin_modulation_table()) {
    if (e.modulation == m && e.transducer == t) return e;
  }
  raise(ErrorCode::UnknownCombination, "modulation/transducer pair not in the table");
}

const ModulationEntry& modulation_range(std::string_view modulation, std::string_view transducer) {
  std::optional<Modulation> m;
  if (modulation == "direct") m = Modulation::Direct;
  else if (modulation == "irda") m = Modulation::IrDA;
  else if (modulation == "tv-remote") m = Modulation::TvRemote;
  else if (modulation == "qam") m = Modulation::Qam;

  std::optional<Transducer> t;
  if (transducer == "infrared") t = Transducer::Infrared;
  else if (transducer == "blue-led") t = Transducer::BlueLed;

  if (!m || !t) {
    raise(ErrorCode::UnknownCombination,
          "no table row for (" + std::string(modulation) + ", " + std::string(transducer) + ")");
  }
  return modulation_range(*m, *t);
}

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

double parse_number(const std::string& value, int line_no) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    raise(ErrorCode::ConfigError,
          "line " + std::to_string(line_no) + ": not a number: '" + value + "'");
  }
}

struct OverrideRecord {
  std::optional<Carrier> carrier;
  std::optional<double> frequency;
  std::optional<double> attenuation;
  std::optional<double> range;
};

}  // namespace

std::vector<ChannelModel> apply_channel_overrides(std::vector<ChannelModel> base, std::istream& in) {
  std::string line;
  std::string section;
  int line_no = 0;
  std::vector<std::pair<std::string, OverrideRecord>> records;
  OverrideRecord* current = nullptr;

  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        raise(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        raise(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": empty channel name");
      }
      records.emplace_back(section, OverrideRecord{});
      current = &records.back().second;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos || current == nullptr) {
      raise(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "carrier") {
      current->carrier = carrier_from_name(value);
    } else if (key == "frequency") {
      current->frequency = parse_number(value, line_no);
    } else if (key == "attenuation_db_per_m") {
      current->attenuation = parse_number(value, line_no);
    } else if (key == "range_m") {
      current->range = parse_number(value, line_no);
    } else {
      raise(ErrorCode::ConfigError,
            "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }

  for (const auto& [name, rec] : records) {
    auto it = std::find_if(base.begin(), base.end(),
                           [&](const ChannelModel& c) { return c.name == name; });
    if (it == base.end()) {
      // New channel: everything has to be specified.
      if (!rec.carrier || !rec.frequency || !rec.attenuation || !rec.range) {
        raise(ErrorCode::ConfigError,
              "channel '" + name + "': new channels need carrier, frequency, "
              "attenuation_db_per_m and range_m");
      }
      base.push_back(make_channel(name, *rec.carrier, *rec.frequency, *rec.attenuation,
                                  *rec.range, 0.1));
      continue;
    }
    if (rec.carrier) it->carrier = *rec.carrier;
    if (rec.frequency) it->frequency_or_wavelength = *rec.frequency;
    const double attenuation = rec.attenuation.value_or(it->attenuation_db_per_m);
    const double range = rec.range.value_or(max_range_m(*it));
    if (attenuation <= 0.0 || range <= 0.0) {
      raise(ErrorCode::ConfigError, "channel '" + name + "': attenuation and range must be positive");
    }
    it->attenuation_db_per_m = attenuation;
    it->link_budget_db = attenuation * range;
  }
  return base;
}

std::vector<ChannelModel> load_channel_overrides(std::vector<ChannelModel> base, const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open channel override file '" + path + "'");
  return apply_channel_overrides(std::move(base), in);
}

}  // namespace uwsc::channel
