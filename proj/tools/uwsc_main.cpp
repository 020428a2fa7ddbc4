// uwsc: underwater swarm sensing-and-communication toolbox.
//
// Subcommands: link-budget (channel table), locality (swarm communication
// radius), efield-calib (localization error sweep), run (scenario execution),
// sweep (parameter sweep over runs).
//
// Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.

#include "uwsc/channel.hpp"
#include "uwsc/efield.hpp"
#include "uwsc/metrics.hpp"
#include "uwsc/scenario.hpp"
#include "uwsc/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string default_out_dir() {
  const char* env = std::getenv("UWSC_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : ".";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) uwsc::raise(uwsc::ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) uwsc::raise(uwsc::ErrorCode::IoError, "short write to '" + path + "'");
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stod(token));
  }
  return values;
}

int run_link_budget(const std::string& channel_name, bool all, const std::string& csv_path) {
  const auto& channels = uwsc::channel::builtin_channels();
  std::vector<const uwsc::channel::ChannelModel*> selected;
  if (all) {
    for (const auto& c : channels) selected.push_back(&c);
  } else {
    selected.push_back(&uwsc::channel::find_channel(channels, channel_name));
  }

  std::printf("%-14s %-8s %14s %12s %12s\n", "channel", "carrier", "atten[dB/m]", "budget[dB]",
              "range[m]");
  for (const auto* c : selected) {
    std::printf("%-14s %-8s %14g %12g %12g\n", c->name.c_str(),
                uwsc::channel::carrier_name(c->carrier), c->attenuation_db_per_m,
                c->link_budget_db, uwsc::channel::max_range_m(*c));
  }

  if (!csv_path.empty()) {
    std::string csv = "name,carrier,frequency_or_wavelength,attenuation_db_per_m,link_budget_db,"
                      "max_range_m\n";
    char line[256];
    for (const auto* c : selected) {
      std::snprintf(line, sizeof(line), "%s,%s,%.17g,%.17g,%.17g,%.17g\n", c->name.c_str(),
                    uwsc::channel::carrier_name(c->carrier), c->frequency_or_wavelength,
                    c->attenuation_db_per_m, c->link_budget_db, uwsc::channel::max_range_m(*c));
      csv += line;
    }
    write_file(csv_path, csv);
  }
  return kExitOk;
}

int run_locality(double volume, int count) {
  const double r = uwsc::channel::local_comm_radius_m(volume, count);
  std::printf("R_c = %.3f m (%s)\n", r,
              uwsc::channel::range_class_name(uwsc::channel::classify_range(r)));
  return kExitOk;
}

struct CalibCli {
  double half_spacing = 0.05;
  std::string r_range = "0.1:0.5";
  double noise = 0.0;
  int trials = 1000;
  std::uint64_t seed = 1;
  int adc_bits = 0;  // ideal chain unless a quantizer is requested
  double gain = 1000.0;
  double full_scale = 5.0;
  double rate = 10e3;
  double freq = 2.5e3;
  double duration = 0.02;
  double amplitude = 1e-3;
  std::string out;
};

int run_efield_calib(const CalibCli& cli) {
  uwsc::efield::CalibrationParams params;
  params.half_spacing_m = cli.half_spacing;
  const auto colon = cli.r_range.find(':');
  if (colon == std::string::npos) {
    uwsc::raise(uwsc::ErrorCode::InvalidArgument, "--r-range expects MIN:MAX");
  }
  params.r_min_m = std::stod(cli.r_range.substr(0, colon));
  params.r_max_m = std::stod(cli.r_range.substr(colon + 1));
  params.noise_sigma_v = cli.noise;
  params.trials = cli.trials;
  params.seed = uwsc::Seed{cli.seed};
  params.amplitude_scale = cli.amplitude;
  params.carrier_hz = cli.freq;
  params.duration_s = cli.duration;
  params.receiver.half_spacing_m = cli.half_spacing;
  params.receiver.gain = cli.gain;
  params.receiver.adc_bits = cli.adc_bits;
  params.receiver.full_scale_v = cli.full_scale;
  params.receiver.sample_rate_hz = cli.rate;

  const auto result = uwsc::efield::calibration_sweep(params);

  std::ostringstream csv;
  uwsc::efield::write_calibration_csv(csv, result.records);
  const std::string out_path = cli.out.empty() ? default_out_dir() + "/efield_calib.csv" : cli.out;
  write_file(out_path, csv.str());

  if (result.records.empty()) {
    std::printf("trials=0 no data (csv: %s)\n", out_path.c_str());
  } else {
    std::printf("trials=%zu degenerate=%d median_err_deg=%.6g max_err_deg=%.6g "
                "p99.9_err_deg=%.6g (csv: %s)\n",
                result.records.size(), result.degenerate_trials, result.median_err_deg(),
                result.max_err_deg(), result.percentile_err_deg(99.9), out_path.c_str());
  }
  return kExitOk;
}

int run_scenario_cmd(const std::string& config_path, std::optional<std::uint64_t> seed,
                     const std::string& out_dir) {
  auto config = uwsc::sim::ScenarioConfig::load(config_path);
  const uwsc::Seed run_seed{seed.value_or(config.seed)};

  uwsc::sim::World world(config, run_seed);
  world.run();

  const std::string base = out_dir + "/" + config.name;
  write_file(base + "_metrics.json", world.metrics().to_json());
  std::ostringstream series;
  world.metrics().write_series_csv(series);
  write_file(base + "_series.csv", series.str());
  std::string trace;
  for (const auto& line : world.trace()) {
    trace += line;
    trace += '\n';
  }
  write_file(base + "_trace.log", trace);

  const auto& m = world.metrics();
  std::printf("scenario=%s seed=%llu robots=%d sent=%ld delivered=%ld collided=%ld echoes=%zu "
              "dockings=%zu\n",
              config.name.c_str(), static_cast<unsigned long long>(run_seed.value), m.robots,
              m.packets_sent, m.packets_delivered, m.packets_collided, m.echo_events.size(),
              m.dockings.size());
  std::printf("outputs: %s_metrics.json, %s_series.csv, %s_trace.log\n", base.c_str(),
              base.c_str(), base.c_str());
  return kExitOk;
}

int run_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_text, const std::string& seeds_text,
              const std::string& out_path) {
  const auto base_config = uwsc::sim::ScenarioConfig::load(config_path);
  const auto values = parse_number_list(values_text);
  std::vector<std::uint64_t> seeds;
  for (const double s : parse_number_list(seeds_text)) {
    seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (seeds.empty()) seeds.push_back(base_config.seed);

  std::string csv =
      "param,value,seed,robots,tank_volume_m3,local_comm_radius_m,packets_sent,"
      "packets_delivered,packets_collided,packets_out_of_range,echo_count,"
      "ambient_detections,docking_count,first_docking_s,ascent_total\n";
  char line[512];
  for (const double value : values) {
    for (const auto seed : seeds) {
      auto config = base_config;
      config.set_param(param, value);
      const auto metrics = uwsc::sim::run_scenario(config, uwsc::Seed{seed});
      const double first_dock = metrics.dockings.empty() ? -1.0 : metrics.dockings.front().t_s;
      long ascents = 0;
      for (const auto& [id, n] : metrics.ascent_counts) ascents += n;
      std::snprintf(line, sizeof(line),
                    "%s,%.17g,%llu,%d,%.17g,%.17g,%ld,%ld,%ld,%ld,%zu,%ld,%zu,%.17g,%ld\n",
                    param.c_str(), value, static_cast<unsigned long long>(seed), metrics.robots,
                    metrics.tank_volume_m3, metrics.local_comm_radius_m, metrics.packets_sent,
                    metrics.packets_delivered, metrics.packets_collided,
                    metrics.packets_out_of_range, metrics.echo_events.size(),
                    metrics.ambient_detections, metrics.dockings.size(), first_dock, ascents);
      csv += line;
    }
  }
  write_file(out_path, csv);
  std::printf("sweep %s over %zu value(s) x %zu seed(s): %zu run(s) -> %s\n", param.c_str(),
              values.size(), seeds.size(), values.size() * seeds.size(), out_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underwater swarm local sensing and communication toolbox"};
  app.require_subcommand(1);

  // link-budget
  auto* link = app.add_subcommand("link-budget", "Channel attenuation, budget and range table");
  std::string link_channel;
  bool link_all = false;
  std::string link_csv;
  link->add_option("channel", link_channel, "Channel name (e.g. sonar, blue, efield)");
  link->add_flag("--all", link_all, "All channels");
  link->add_option("--csv", link_csv, "Also write the table as CSV");

  // locality
  auto* locality = app.add_subcommand("locality", "Local communication radius for a swarm");
  double loc_volume = 0.0;
  int loc_count = 0;
  locality->add_option("--volume", loc_volume, "Swarm volume in cubic meters")->required();
  locality->add_option("--count", loc_count, "Number of robots")->required();

  // efield-calib
  auto* calib = app.add_subcommand("efield-calib",
                                   "Electric-field localization error sweep "
                                   "(forward model, receiver chain, inversion)");
  CalibCli calib_cli;
  calib->add_option("--s", calib_cli.half_spacing, "Electrode half spacing in meters");
  calib->add_option("--r-range", calib_cli.r_range, "Sender distance range MIN:MAX in meters");
  calib->add_option("--noise", calib_cli.noise, "Gaussian noise sigma in volts (pre-gain)");
  calib->add_option("--trials", calib_cli.trials, "Number of trials");
  calib->add_option("--seed", calib_cli.seed, "Random seed");
  calib->add_option("--adc-bits", calib_cli.adc_bits, "ADC bits (0 = ideal chain)");
  calib->add_option("--gain", calib_cli.gain, "Amplifier gain");
  calib->add_option("--full-scale", calib_cli.full_scale, "ADC full scale in volts");
  calib->add_option("--rate", calib_cli.rate, "Sample rate in Hz");
  calib->add_option("--freq", calib_cli.freq, "Carrier frequency in Hz");
  calib->add_option("--duration", calib_cli.duration, "Capture duration per trial in seconds");
  calib->add_option("--amplitude", calib_cli.amplitude, "Forward-model amplitude scale");
  calib->add_option("--out", calib_cli.out, "CSV output path");

  // run
  auto* run = app.add_subcommand("run", "Execute a scenario file");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::string run_out = default_out_dir();
  run->add_option("config", run_config, "Scenario file")->required();
  run->add_option("--seed", run_seed, "Seed override (defaults to the file's [run] seed)");
  run->add_option("--out", run_out, "Output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a scenario across parameter values and seeds");
  std::string sweep_config;
  std::string sweep_param;
  std::string sweep_values;
  std::string sweep_seeds;
  std::string sweep_out = default_out_dir() + "/sweep.csv";
  sweep->add_option("config", sweep_config, "Scenario file")->required();
  sweep->add_option("--param", sweep_param, "Parameter path, e.g. robots.count")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds");
  sweep->add_option("--out", sweep_out, "Aggregated CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (link->parsed()) {
      if (!link_all && link_channel.empty()) {
        std::fprintf(stderr, "link-budget: give a channel name or --all\n");
        return kExitUsage;
      }
      return run_link_budget(link_channel, link_all, link_csv);
    }
    if (locality->parsed()) return run_locality(loc_volume, loc_count);
    if (calib->parsed()) return run_efield_calib(calib_cli);
    if (run->parsed()) return run_scenario_cmd(run_config, run_seed, run_out);
    if (sweep->parsed()) {
      return run_sweep(sweep_config, sweep_param, sweep_values, sweep_seeds, sweep_out);
    }
  } catch (const uwsc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == uwsc::ErrorCode::IoError ? kExitIo : kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
