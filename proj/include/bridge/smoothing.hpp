#pragma once

#include "bridge/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bridge::smoothing {

struct TrackPoint {
  std::int64_t frame_index = 0;
  geometry::CourtPoint position;
  /// Interpolated records are carried through but never used as measurements.
  bool synthetic = false;
  /// Per-measurement noise; falls back to SmoothingConfig::measurement_sigma_m.
  std::optional<double> measurement_sigma_m;
};

struct SmoothingConfig {
  double process_accel_sigma = 3.0;   // m/s^2
  double measurement_sigma_m = 0.25;  // m
  double standstill_gate_m = 0.05;    // m per frame
  double heading_smoothing_alpha = 0.6;

  void validate() const;  // throws InvalidConfig naming the field
};

struct Velocity {
  double vx = 0.0;
  double vy = 0.0;
};

struct TrackSample {
  std::int64_t frame_index = 0;
  geometry::CourtPoint position;
  Velocity velocity;
  double theta_base = 0.0;  // degrees, filled by heading_from_track
  bool synthetic = false;
};

struct SmoothedTrack {
  std::vector<TrackSample> samples;
};

/// Constant-velocity Kalman filter followed by a Rauch-Tung-Striebel pass.
/// Throws EmptyTrack, or MalformedRecord when frame indices do not increase.
SmoothedTrack smooth_trajectory(std::span<const TrackPoint> points, double fps,
                                const SmoothingConfig& cfg);

/// Fills theta_base from per-frame displacement of the smoothed positions.
SmoothedTrack heading_from_track(SmoothedTrack track, const SmoothingConfig& cfg);

/// RMS magnitude of second differences times fps^2. Throws TooShort (< 3).
double rms_acceleration(std::span<const geometry::CourtPoint> positions, double fps);
double rms_acceleration(const SmoothedTrack& track, double fps);

}  // namespace bridge::smoothing
