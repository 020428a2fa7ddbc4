// Shared geometry, angle, error, and deterministic-randomness primitives.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace uwsc {

// All positions and displacements are meters in a right-handed frame with z up.
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

enum class ErrorCode {
  InvalidArgument,
  DegenerateDirection,
  SingularPoint,
  OutOfModel,
  DegenerateQuad,
  InsufficientSamples,
  UnknownChannel,
  UnknownCombination,
  OutOfRange,
  ProtocolViolation,
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::OutOfModel: return "OutOfModel";
    case ErrorCode::DegenerateQuad: return "DegenerateQuad";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::UnknownCombination: return "UnknownCombination";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

/// Planar bearing stored in degrees, normalized to the half-open interval (-180, 180].
class Bearing {
 public:
  Bearing() = default;

  static Bearing from_degrees(double deg) { return Bearing(normalize_degrees(deg)); }
  static Bearing from_radians(double rad) { return from_degrees(rad_to_deg(rad)); }

  double degrees() const { return degrees_; }
  double radians() const { return deg_to_rad(degrees_); }

  // Maps any finite angle into (-180, 180].
  static double normalize_degrees(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
  }

 private:
  explicit Bearing(double normalized_deg) : degrees_(normalized_deg) {}
  double degrees_ = 0.0;
};

/// Magnitude of the wrapped difference between two bearings, in [0, 180].
inline double angular_distance_deg(double a_deg, double b_deg) {
  return std::abs(Bearing::normalize_degrees(a_deg - b_deg));
}

inline double angular_distance_deg(const Bearing& a, const Bearing& b) {
  return angular_distance_deg(a.degrees(), b.degrees());
}

struct Seed {
  std::uint64_t value = 0;
};

/// Deterministic generator (splitmix64 core). Same seed gives the same stream
/// on every platform; simulations thread one Rng explicitly instead of using
/// global state. Substreams for independent consumers come from derive().
class Rng {
 public:
  explicit Rng(Seed seed) : base_(seed.value), state_(seed.value) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Zero-mean gaussian via Box-Muller (pair cached).
  double gaussian(double sigma) {
    if (has_cached_) {
      has_cached_ = false;
      return cached_ * sigma;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    cached_ = radius * std::sin(theta);
    has_cached_ = true;
    return radius * std::cos(theta) * sigma;
  }

  /// Independent substream keyed on the original seed, not the current state.
  Rng derive(std::uint64_t stream) const {
    std::uint64_t z = base_ ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(Seed{z ^ (z >> 31)});
  }

 private:
  std::uint64_t base_ = 0;
  std::uint64_t state_ = 0;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// Euclidean distance in meters.
inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Bearing of (to - from) projected onto the horizontal plane. The convention
/// follows the electrode layout: 0 deg along +x, 90 deg along +y. Robots keep
/// their electrodes vertical, so the horizontal plane is the sensing plane.
inline Bearing bearing_in_plane(const Vec3& from, const Vec3& to) {
  const double dx = to.x() - from.x();
  const double dy = to.y() - from.y();
  if (std::hypot(dx, dy) < 1e-12) {
    raise(ErrorCode::DegenerateDirection, "horizontal projection is the zero vector");
  }
  return Bearing::from_radians(std::atan2(dy, dx));
}

}  // namespace uwsc
