// Electric-field sensing and communication: dipole forward models (exact
// two-charge and the planar far-field approximation), the receiver signal
// chain with amplifier/highpass/ADC, quadrature amplitude estimation, and the
// closed-form bearing/distance inversion.
#pragma once

#include "uwsc/core.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace uwsc::efield {

/// Vertical sender dipole. The electrodes sit at position +- separation/2
/// along z; their charge is C * a_o * sin(omega t).
struct DipoleSender {
  Vec3 position = Vec3::Zero();
  double electrode_separation_m = 0.02;
  double output_amplitude_v = 1.0;   // a_o > 0
  double omega_rad_s = 2.0 * kPi * 2.5e3;
  double capacitance_f = 1e-9;
  double epsilon_0 = 8.8541878128e-12;
  double epsilon_r = 81.0;  // water
};

/// Four differential electrode pairs in a horizontal cross around the center:
/// pair 1 at +x, pair 2 at +y, pair 3 at -x, pair 4 at -y, each offset by the
/// half spacing s. Each pair is itself vertical with pair_separation_m between
/// its electrodes, matching the sender orientation. The analog chain is a
/// highpass (DC block), a differential amplifier, and an ADC.
struct ReceiverArray {
  Vec3 position = Vec3::Zero();
  double half_spacing_m = 0.05;     // s > 0
  double pair_separation_m = 0.02;  // vertical extent of one pair
  double gain = 1000.0;
  int adc_bits = 14;                // 0 disables quantization (ideal chain)
  double full_scale_v = 5.0;        // ADC accepts [-full_scale, +full_scale)
  double sample_rate_hz = 10e3;

  /// Horizontal offset of pair i (0-based) from the array center.
  Vec3 pair_offset(int i) const;
};

/// Non-negative sinus amplitudes measured at the four pairs.
struct AmplitudeQuad {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;

  double operator[](int i) const;
};

enum class Quality { WellConditioned, NearAxis, OutOfModel };

const char* quality_name(Quality q);

struct LocalizationResult {
  double r_m = 0.0;
  Bearing alpha;
  double u1 = 0.0;  // (sqrt(a1/a3)+1)/(sqrt(a1/a3)-1)
  double u2 = 0.0;
  Quality quality = Quality::WellConditioned;
};

/// Exact field of the two point charges at point p and time t. Throws
/// SingularPoint when p coincides with an electrode. The field is linear in
/// the drive amplitude and senders superpose.
Vec3 dipole_field(const DipoleSender& sender, const Vec3& p, double t_s);

/// Planar far-field amplitude model: a_i = A / (r -+ s cos/sin alpha)^2 with
/// the opaque scale A = A_o / F(omega). Requires r > s (OutOfModel otherwise).
AmplitudeQuad paper_amplitudes(double a_scale, double r_m, double alpha_deg, double half_spacing_m);

/// Differential-potential amplitudes from the exact two-charge potential,
/// evaluated at the receiver's eight electrode positions. Agrees with
/// paper_amplitudes in ratio structure as r/s grows for coplanar scenes.
AmplitudeQuad exact_amplitudes(const DipoleSender& sender, const ReceiverArray& receiver);

/// Closed-form inversion of paper_amplitudes. Sign information comes from the
/// amplitude differences (a1 - a3 carries the cos sign, a2 - a4 the sin sign),
/// which extends the scalar arctangent to the full circle. The distance uses
/// whichever axis is better conditioned (larger |sqrt(ratio) - 1|). A ratio
/// within 1e-6 of 1 on one axis flags NearAxis; on both axes the sender is
/// equidistant from all electrodes and the quad is unobservable
/// (DegenerateQuad). A recovered distance at or below s flags OutOfModel.
LocalizationResult localize(const AmplitudeQuad& quad, double half_spacing_m);

/// Sender/receiver pair for pipeline-style use.
struct EFieldScene {
  DipoleSender sender;
  ReceiverArray receiver;
};

/// exact_amplitudes + localize, with the planarity limitation enforced as a
/// validity flag: scenes whose sender sits off the receiver plane by more than
/// plane_tolerance_m still compute but come back OutOfModel.
LocalizationResult localize_scene(const EFieldScene& scene, double plane_tolerance_m = 1e-3);

/// Four digitized sample streams plus per-stream clipping flags.
struct ReceiverCapture {
  std::array<Eigen::ArrayXd, 4> streams;
  std::array<bool, 4> clipped = {false, false, false, false};
  double sample_rate_hz = 0.0;

  bool any_clipped() const { return clipped[0] || clipped[1] || clipped[2] || clipped[3]; }
};

/// Simulates the receiver chain for a quad of sinus amplitudes: gaussian noise
/// (sigma referred to the electrode pair, before gain), DC block, gain, and
/// midtread quantization to adc_bits over [-full_scale, full_scale). Requires
/// at least two carrier periods. Deterministic per seed; dc_offset_v models a
/// constant electrode bias and is removed by the highpass.
ReceiverCapture sample_receiver(const AmplitudeQuad& quad, double sender_omega_rad_s,
                                const ReceiverArray& receiver, double duration_s,
                                double noise_sigma_v, Seed seed, double dc_offset_v = 0.0);

/// Lock-in amplitude estimate: correlate against quadrature references at
/// omega and return 2*sqrt(I^2+Q^2)/n. Unbiased for noiseless integer-period
/// input; throws InsufficientSamples below two periods.
double estimate_amplitude(const Eigen::ArrayXd& stream, double omega_rad_s, double sample_rate_hz);

/// On-off keyed message on the e-field carrier.
struct FieldMessage {
  std::vector<std::uint8_t> bits;
  double symbol_rate_hz = 250.0;
};

/// Per-symbol drive amplitude: bit 1 holds a_o, bit 0 holds zero.
struct Envelope {
  std::vector<double> levels_v;
  double symbol_rate_hz = 0.0;

  double duration_s() const {
    return symbol_rate_hz > 0.0 ? static_cast<double>(levels_v.size()) / symbol_rate_hz : 0.0;
  }
};

Envelope encode_field_message(const FieldMessage& message, const DipoleSender& sender);

/// Carrier synthesis of an envelope, sampled at sample_rate_hz. The symbol
/// rate may not exceed sample_rate/10.
Eigen::ArrayXd modulate_envelope(const Envelope& envelope, double omega_rad_s,
                                 double sample_rate_hz, double phase_rad = 0.0);

/// Per-symbol lock-in amplitude compared against threshold_v. Round-trips
/// encode_field_message exactly through a noiseless channel; bit errors under
/// noise are data, not faults.
std::vector<std::uint8_t> decode_field_message(const Eigen::ArrayXd& stream, double omega_rad_s,
                                               double sample_rate_hz, double symbol_rate_hz,
                                               double threshold_v);

/// One localization trial of the calibration sweep.
struct TrialRecord {
  double true_r_m = 0.0;
  double true_alpha_deg = 0.0;
  double est_r_m = 0.0;
  double est_alpha_deg = 0.0;
  double err_alpha_deg = 0.0;
  double noise_sigma_v = 0.0;
  std::uint64_t seed = 0;
};

struct CalibrationParams {
  double half_spacing_m = 0.05;
  double r_min_m = 0.1;
  double r_max_m = 0.5;
  double noise_sigma_v = 0.0;
  int trials = 1000;
  Seed seed{1};
  double amplitude_scale = 1e-3;      // A = A_o/F(omega), in V m^2
  double carrier_hz = 2.5e3;
  double duration_s = 0.02;
  ReceiverArray receiver;             // gain/adc/full-scale/rate template
};

/// Runs forward -> sample -> estimate -> localize per trial. Trials whose quad
/// comes back degenerate are dropped (counted in degenerate_trials).
struct CalibrationResult {
  std::vector<TrialRecord> records;
  int degenerate_trials = 0;

  double median_err_deg() const;
  double max_err_deg() const;
  double percentile_err_deg(double p) const;  // p in [0, 100], linear interpolation
};

CalibrationResult calibration_sweep(const CalibrationParams& params);

/// CSV with the frozen column set:
/// true_r,true_alpha_deg,est_r,est_alpha_deg,err_alpha_deg,noise_sigma,seed
void write_calibration_csv(std::ostream& out, const std::vector<TrialRecord>& records);

}  // namespace uwsc::efield
