#include "uwsc/efield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace uwsc::efield {

Vec3 ReceiverArray::pair_offset(int i) const {
  const double s = half_spacing_m;
  switch (i) {
    case 0: return Vec3(s, 0.0, 0.0);    // a1, toward alpha = 0
    case 1: return Vec3(0.0, s, 0.0);    // a2, toward alpha = 90
    case 2: return Vec3(-s, 0.0, 0.0);   // a3
    case 3: return Vec3(0.0, -s, 0.0);   // a4
    default: raise(ErrorCode::InvalidArgument, "pair index out of range");
  }
}

double AmplitudeQuad::operator[](int i) const {
  switch (i) {
    case 0: return a1;
    case 1: return a2;
    case 2: return a3;
    case 3: return a4;
    default: raise(ErrorCode::InvalidArgument, "quad index out of range");
  }
}

const char* quality_name(Quality q) {
  switch (q) {
    case Quality::WellConditioned: return "WellConditioned";
    case Quality::NearAxis: return "NearAxis";
    case Quality::OutOfModel: return "OutOfModel";
  }
  return "?";
}

namespace {

// Electrodes of the vertical sender dipole.
struct ElectrodePair {
  Vec3 plus;
  Vec3 minus;
};

ElectrodePair sender_electrodes(const DipoleSender& sender) {
  const Vec3 half(0.0, 0.0, sender.electrode_separation_m / 2.0);
  return {sender.position + half, sender.position - half};
}

double coulomb_scale(const DipoleSender& sender) {
  return sender.capacitance_f * sender.output_amplitude_v /
         (4.0 * kPi * sender.epsilon_0 * sender.epsilon_r);
}

// Potential shape of unit charges +-1 at the electrodes (scale applied by the caller).
double potential_shape(const ElectrodePair& e, const Vec3& p) {
  const double dp = (p - e.plus).norm();
  const double dm = (p - e.minus).norm();
  if (dp < 1e-9 || dm < 1e-9) {
    raise(ErrorCode::SingularPoint, "evaluation point coincides with a sender electrode");
  }
  return 1.0 / dp - 1.0 / dm;
}

}  // namespace

Vec3 dipole_field(const DipoleSender& sender, const Vec3& p, double t_s) {
  const ElectrodePair e = sender_electrodes(sender);
  const Vec3 rp = p - e.plus;
  const Vec3 rm = p - e.minus;
  const double dp = rp.norm();
  const double dm = rm.norm();
  if (dp < 1e-9 || dm < 1e-9) {
    raise(ErrorCode::SingularPoint, "field point coincides with a sender electrode");
  }
  const double q = sender.capacitance_f * sender.output_amplitude_v *
                   std::sin(sender.omega_rad_s * t_s);
  const double k = q / (4.0 * kPi * sender.epsilon_0 * sender.epsilon_r);
  return k * (rp / (dp * dp * dp) - rm / (dm * dm * dm));
}

AmplitudeQuad paper_amplitudes(double a_scale, double r_m, double alpha_deg, double half_spacing_m) {
  if (a_scale <= 0.0) raise(ErrorCode::InvalidArgument, "amplitude scale must be positive");
  if (half_spacing_m <= 0.0) raise(ErrorCode::InvalidArgument, "half spacing must be positive");
  if (r_m <= half_spacing_m) {
    raise(ErrorCode::OutOfModel, "the planar model needs r > s");
  }
  const double a = deg_to_rad(alpha_deg);
  const double sc = half_spacing_m * std::cos(a);
  const double ss = half_spacing_m * std::sin(a);
  AmplitudeQuad quad;
  quad.a1 = a_scale / ((r_m - sc) * (r_m - sc));
  quad.a2 = a_scale / ((r_m - ss) * (r_m - ss));
  quad.a3 = a_scale / ((r_m + sc) * (r_m + sc));
  quad.a4 = a_scale / ((r_m + ss) * (r_m + ss));
  return quad;
}

AmplitudeQuad exact_amplitudes(const DipoleSender& sender, const ReceiverArray& receiver) {
  if ((sender.position - receiver.position).norm() < 1e-9) {
    raise(ErrorCode::SingularPoint, "sender and receiver positions coincide");
  }
  const ElectrodePair e = sender_electrodes(sender);
  const double scale = coulomb_scale(sender);
  const Vec3 half(0.0, 0.0, receiver.pair_separation_m / 2.0);

  double a[4];
  for (int i = 0; i < 4; ++i) {
    const Vec3 center = receiver.position + receiver.pair_offset(i);
    const double top = potential_shape(e, center + half);
    const double bottom = potential_shape(e, center - half);
    // The drive is sinusoidal, so the differential amplitude is the magnitude
    // of the peak potential difference.
    a[i] = scale * std::abs(top - bottom);
  }
  return AmplitudeQuad{a[0], a[1], a[2], a[3]};
}

LocalizationResult localize(const AmplitudeQuad& quad, double half_spacing_m) {
  if (half_spacing_m <= 0.0) raise(ErrorCode::InvalidArgument, "half spacing must be positive");
  for (int i = 0; i < 4; ++i) {
    if (!(quad[i] > 0.0) || !std::isfinite(quad[i])) {
      raise(ErrorCode::InvalidArgument, "all four amplitudes must be positive and finite");
    }
  }

  const double sq1 = std::sqrt(quad.a1 / quad.a3);
  const double sq2 = std::sqrt(quad.a2 / quad.a4);
  constexpr double kNearTolerance = 1e-6;
  const double dev1 = std::abs(sq1 - 1.0);
  const double dev2 = std::abs(sq2 - 1.0);
  if (dev1 < kNearTolerance && dev2 < kNearTolerance) {
    raise(ErrorCode::DegenerateQuad,
          "sender equidistant from all electrode pairs; r is unobservable");
  }

  // Cancellation-free form of (sqrt(a1/a3)-1)/(sqrt(a1/a3)+1): equals
  // s*cos(alpha)/r for quads of the planar model, and carries the sign of
  // a1 - a3 (respectively a2 - a4) needed for the full-circle bearing.
  const auto v_of = [](double near, double far) {
    const double root_sum = std::sqrt(near) + std::sqrt(far);
    return (near - far) / (root_sum * root_sum);
  };
  const double v1 = v_of(quad.a1, quad.a3);
  const double v2 = v_of(quad.a2, quad.a4);

  LocalizationResult result;
  result.u1 = (sq1 + 1.0) / (sq1 - 1.0);
  result.u2 = (sq2 + 1.0) / (sq2 - 1.0);
  const double alpha_rad = std::atan2(v2, v1);
  result.alpha = Bearing::from_radians(alpha_rad);

  // Distance from the better-conditioned axis.
  if (dev1 >= dev2) {
    result.r_m = half_spacing_m * std::cos(alpha_rad) * result.u1;
  } else {
    result.r_m = half_spacing_m * std::sin(alpha_rad) * result.u2;
  }

  result.quality = (std::min(dev1, dev2) < kNearTolerance) ? Quality::NearAxis
                                                           : Quality::WellConditioned;
  if (!(result.r_m > half_spacing_m)) {
    // No r > s scene produces such a quad; the planar model does not apply.
    result.quality = Quality::OutOfModel;
  }
  return result;
}

LocalizationResult localize_scene(const EFieldScene& scene, double plane_tolerance_m) {
  const AmplitudeQuad quad = exact_amplitudes(scene.sender, scene.receiver);
  LocalizationResult result = localize(quad, scene.receiver.half_spacing_m);
  const double out_of_plane = std::abs(scene.sender.position.z() - scene.receiver.position.z());
  if (out_of_plane > plane_tolerance_m) {
    result.quality = Quality::OutOfModel;
  }
  return result;
}

namespace {

double quantize(double x, int bits, double full_scale) {
  if (bits <= 0) return x;
  const double levels = std::ldexp(1.0, bits);  // 2^bits
  const double step = 2.0 * full_scale / levels;
  double q = std::nearbyint(x / step);
  const double q_min = -levels / 2.0;
  const double q_max = levels / 2.0 - 1.0;
  q = std::clamp(q, q_min, q_max);
  return q * step;
}

}  // namespace

ReceiverCapture sample_receiver(const AmplitudeQuad& quad, double sender_omega_rad_s,
                                const ReceiverArray& receiver, double duration_s,
                                double noise_sigma_v, Seed seed, double dc_offset_v) {
  if (sender_omega_rad_s <= 0.0) raise(ErrorCode::InvalidArgument, "omega must be positive");
  if (receiver.sample_rate_hz <= 0.0) raise(ErrorCode::InvalidArgument, "sample rate must be positive");
  const double period = 2.0 * kPi / sender_omega_rad_s;
  if (duration_s < 2.0 * period) {
    raise(ErrorCode::InvalidArgument, "capture must span at least two carrier periods");
  }
  const auto n = static_cast<Eigen::Index>(std::llround(duration_s * receiver.sample_rate_hz));
  if (n < 4) raise(ErrorCode::InvalidArgument, "capture too short for the sample rate");

  ReceiverCapture capture;
  capture.sample_rate_hz = receiver.sample_rate_hz;
  Rng base(seed);
  for (int i = 0; i < 4; ++i) {
    Rng noise = base.derive(static_cast<std::uint64_t>(i));
    Eigen::ArrayXd raw(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / receiver.sample_rate_hz;
      double v = quad[i] * std::sin(sender_omega_rad_s * t) + dc_offset_v;
      if (noise_sigma_v > 0.0) v += noise.gaussian(noise_sigma_v);
      raw[k] = v;
    }
    raw -= raw.mean();  // highpass: the coupling capacitors block DC
    Eigen::ArrayXd amplified = receiver.gain * raw;
    capture.clipped[i] = receiver.gain * quad[i] > receiver.full_scale_v;
    for (Eigen::Index k = 0; k < n; ++k) {
      amplified[k] = quantize(amplified[k], receiver.adc_bits, receiver.full_scale_v);
    }
    capture.streams[i] = std::move(amplified);
  }
  return capture;
}

double estimate_amplitude(const Eigen::ArrayXd& stream, double omega_rad_s, double sample_rate_hz) {
  if (omega_rad_s <= 0.0 || sample_rate_hz <= 0.0) {
    raise(ErrorCode::InvalidArgument, "omega and sample rate must be positive");
  }
  const auto n = stream.size();
  const double period = 2.0 * kPi / omega_rad_s;
  if (static_cast<double>(n) / sample_rate_hz < 2.0 * period) {
    raise(ErrorCode::InsufficientSamples, "stream spans less than two carrier periods");
  }
  double in_phase = 0.0;
  double quadrature = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / sample_rate_hz;
    in_phase += stream[k] * std::sin(omega_rad_s * t);
    quadrature += stream[k] * std::cos(omega_rad_s * t);
  }
  return 2.0 * std::hypot(in_phase, quadrature) / static_cast<double>(n);
}

Envelope encode_field_message(const FieldMessage& message, const DipoleSender& sender) {
  if (message.symbol_rate_hz <= 0.0) raise(ErrorCode::InvalidArgument, "symbol rate must be positive");
  Envelope envelope;
  envelope.symbol_rate_hz = message.symbol_rate_hz;
  envelope.levels_v.reserve(message.bits.size());
  for (const auto bit : message.bits) {
    envelope.levels_v.push_back(bit ? sender.output_amplitude_v : 0.0);
  }
  return envelope;
}

namespace {

Eigen::Index symbol_boundary(int symbol, double sample_rate_hz, double symbol_rate_hz) {
  return static_cast<Eigen::Index>(
      std::llround(static_cast<double>(symbol) * sample_rate_hz / symbol_rate_hz));
}

void check_symbol_rate(double symbol_rate_hz, double sample_rate_hz) {
  if (symbol_rate_hz <= 0.0) raise(ErrorCode::InvalidArgument, "symbol rate must be positive");
  if (symbol_rate_hz > sample_rate_hz / 10.0) {
    raise(ErrorCode::InvalidArgument, "symbol rate must not exceed sample_rate/10");
  }
}

}  // namespace

Eigen::ArrayXd modulate_envelope(const Envelope& envelope, double omega_rad_s,
                                 double sample_rate_hz, double phase_rad) {
  check_symbol_rate(envelope.symbol_rate_hz, sample_rate_hz);
  const auto symbols = static_cast<int>(envelope.levels_v.size());
  const Eigen::Index n = symbol_boundary(symbols, sample_rate_hz, envelope.symbol_rate_hz);
  Eigen::ArrayXd stream(n);
  for (int k = 0; k < symbols; ++k) {
    const Eigen::Index begin = symbol_boundary(k, sample_rate_hz, envelope.symbol_rate_hz);
    const Eigen::Index end = symbol_boundary(k + 1, sample_rate_hz, envelope.symbol_rate_hz);
    for (Eigen::Index j = begin; j < end; ++j) {
      const double t = static_cast<double>(j) / sample_rate_hz;
      stream[j] = envelope.levels_v[static_cast<std::size_t>(k)] *
                  std::sin(omega_rad_s * t + phase_rad);
    }
  }
  return stream;
}

std::vector<std::uint8_t> decode_field_message(const Eigen::ArrayXd& stream, double omega_rad_s,
                                               double sample_rate_hz, double symbol_rate_hz,
                                               double threshold_v) {
  check_symbol_rate(symbol_rate_hz, sample_rate_hz);
  const auto symbols = static_cast<int>(
      std::llround(static_cast<double>(stream.size()) * symbol_rate_hz / sample_rate_hz));
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(symbols));
  for (int k = 0; k < symbols; ++k) {
    const Eigen::Index begin = symbol_boundary(k, sample_rate_hz, symbol_rate_hz);
    const Eigen::Index end = std::min<Eigen::Index>(
        symbol_boundary(k + 1, sample_rate_hz, symbol_rate_hz), stream.size());
    const Eigen::ArrayXd segment = stream.segment(begin, end - begin);
    // The reference phase restarts at the segment's own t=0; the lock-in
    // magnitude is phase-invariant so the symbol offset does not matter.
    const double amplitude = estimate_amplitude(segment, omega_rad_s, sample_rate_hz);
    bits.push_back(amplitude >= threshold_v ? 1 : 0);
  }
  return bits;
}

double CalibrationResult::median_err_deg() const { return percentile_err_deg(50.0); }

double CalibrationResult::max_err_deg() const {
  double worst = 0.0;
  for (const auto& r : records) worst = std::max(worst, r.err_alpha_deg);
  return worst;
}

double CalibrationResult::percentile_err_deg(double p) const {
  if (records.empty()) return 0.0;
  std::vector<double> errs;
  errs.reserve(records.size());
  for (const auto& r : records) errs.push_back(r.err_alpha_deg);
  std::sort(errs.begin(), errs.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(errs.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, errs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return errs[lo] * (1.0 - frac) + errs[hi] * frac;
}

CalibrationResult calibration_sweep(const CalibrationParams& params) {
  if (params.trials < 0) raise(ErrorCode::InvalidArgument, "trial count must be non-negative");
  if (params.r_min_m <= params.half_spacing_m || params.r_max_m < params.r_min_m) {
    raise(ErrorCode::InvalidArgument, "r range must satisfy s < r_min <= r_max");
  }
  const double omega = 2.0 * kPi * params.carrier_hz;
  CalibrationResult result;
  result.records.reserve(static_cast<std::size_t>(params.trials));
  Rng master(params.seed);

  for (int trial = 0; trial < params.trials; ++trial) {
    Rng rng = master.derive(static_cast<std::uint64_t>(trial));
    const double r = rng.uniform(params.r_min_m, params.r_max_m);
    const double alpha = 180.0 - 360.0 * rng.uniform01();  // (-180, 180]
    const Seed capture_seed{rng.next_u64()};

    const AmplitudeQuad quad = paper_amplitudes(params.amplitude_scale, r, alpha,
                                                params.half_spacing_m);
    const ReceiverCapture capture = sample_receiver(quad, omega, params.receiver,
                                                    params.duration_s, params.noise_sigma_v,
                                                    capture_seed);
    AmplitudeQuad estimated;
    estimated.a1 = estimate_amplitude(capture.streams[0], omega, params.receiver.sample_rate_hz);
    estimated.a2 = estimate_amplitude(capture.streams[1], omega, params.receiver.sample_rate_hz);
    estimated.a3 = estimate_amplitude(capture.streams[2], omega, params.receiver.sample_rate_hz);
    estimated.a4 = estimate_amplitude(capture.streams[3], omega, params.receiver.sample_rate_hz);

    try {
      const LocalizationResult loc = localize(estimated, params.half_spacing_m);
      TrialRecord record;
      record.true_r_m = r;
      record.true_alpha_deg = alpha;
      // The estimated amplitudes carry the receiver gain; ratios cancel it, so
      // the recovered distance is already in meters.
      record.est_r_m = loc.r_m;
      record.est_alpha_deg = loc.alpha.degrees();
      record.err_alpha_deg = angular_distance_deg(loc.alpha.degrees(), alpha);
      record.noise_sigma_v = params.noise_sigma_v;
      record.seed = capture_seed.value;
      result.records.push_back(record);
    } catch (const Error&) {
      ++result.degenerate_trials;
    }
  }
  return result;
}

void write_calibration_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "true_r,true_alpha_deg,est_r,est_alpha_deg,err_alpha_deg,noise_sigma,seed\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%llu\n", r.true_r_m,
                  r.true_alpha_deg, r.est_r_m, r.est_alpha_deg, r.err_alpha_deg, r.noise_sigma_v,
                  static_cast<unsigned long long>(r.seed));
    out << line;
  }
}

}  // namespace uwsc::efield
