#include "bridge/smoothing.hpp"

#include "bridge/angles.hpp"
#include "bridge/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bridge::smoothing {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

constexpr double kPriorPositionVar = 10.0;   // m^2
constexpr double kPriorVelocityVar = 100.0;  // (m/s)^2

Mat4 transition(double dt) {
  Mat4 f = Mat4::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  return f;
}

// Piecewise-constant white acceleration, per axis:
//   q * [dt^4/4  dt^3/2; dt^3/2  dt^2]
Mat4 process_noise(double dt, double accel_sigma) {
  const double q = accel_sigma * accel_sigma;
  const double a = q * dt * dt * dt * dt / 4.0;
  const double b = q * dt * dt * dt / 2.0;
  const double c = q * dt * dt;
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = a;
  m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = b;
  m(2, 2) = m(3, 3) = c;
  return m;
}

}  // namespace

void SmoothingConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidConfig, std::string("smoothing.") + name + " must be positive");
    }
  };
  positive(process_accel_sigma, "process_accel_sigma");
  positive(measurement_sigma_m, "measurement_sigma_m");
  positive(standstill_gate_m, "standstill_gate_m");
  if (!(heading_smoothing_alpha >= 0.0 && heading_smoothing_alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "smoothing.heading_smoothing_alpha must be in [0, 1]");
  }
}

SmoothedTrack smooth_trajectory(std::span<const TrackPoint> points, double fps,
                                const SmoothingConfig& cfg) {
  if (points.empty()) throw Error(ErrorCode::EmptyTrack, "cannot smooth an empty track");
  if (!(fps > 0.0)) throw Error(ErrorCode::InvalidConfig, "fps must be positive");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].frame_index <= points[i - 1].frame_index) {
      throw Error(ErrorCode::MalformedRecord, "track frame indices must strictly increase");
    }
  }

  const std::size_t n = points.size();
  std::vector<Vec4> x_pred(n), x_filt(n);
  std::vector<Mat4> p_pred(n), p_filt(n), f_step(n);

  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = h(1, 1) = 1.0;

  Vec4 x(points[0].position.x, points[0].position.y, 0.0, 0.0);
  Mat4 p = Vec4(kPriorPositionVar, kPriorPositionVar, kPriorVelocityVar, kPriorVelocityVar)
               .asDiagonal();

  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const double dt =
          static_cast<double>(points[k].frame_index - points[k - 1].frame_index) / fps;
      f_step[k] = transition(dt);
      x = f_step[k] * x;
      p = f_step[k] * p * f_step[k].transpose() + process_noise(dt, cfg.process_accel_sigma);
    }
    x_pred[k] = x;
    p_pred[k] = p;

    if (!points[k].synthetic) {
      const double sigma = points[k].measurement_sigma_m.value_or(cfg.measurement_sigma_m);
      const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * sigma * sigma;
      const Eigen::Vector2d z(points[k].position.x, points[k].position.y);
      const Eigen::Matrix2d s = h * p * h.transpose() + r;
      const Eigen::Matrix<double, 4, 2> gain = p * h.transpose() * s.inverse();
      x = x + gain * (z - h * x);
      // Joseph form keeps P symmetric positive definite.
      const Mat4 i_kh = Mat4::Identity() - gain * h;
      p = i_kh * p * i_kh.transpose() + gain * r * gain.transpose();
    }
    x_filt[k] = x;
    p_filt[k] = p;
  }

  std::vector<Vec4> x_smooth(n);
  x_smooth[n - 1] = x_filt[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) {
    // C = P_k|k F^T P_k+1|k^-1, via a solve on the symmetric predicted covariance.
    const Mat4 c =
        p_pred[k + 1].ldlt().solve(f_step[k + 1] * p_filt[k].transpose()).transpose();
    x_smooth[k] = x_filt[k] + c * (x_smooth[k + 1] - x_pred[k + 1]);
  }

  SmoothedTrack out;
  out.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    TrackSample s;
    s.frame_index = points[k].frame_index;
    s.position = {x_smooth[k](0), x_smooth[k](1)};
    s.velocity = {x_smooth[k](2), x_smooth[k](3)};
    s.synthetic = points[k].synthetic;
    out.samples.push_back(s);
  }
  return out;
}

SmoothedTrack heading_from_track(SmoothedTrack track, const SmoothingConfig& cfg) {
  auto& s = track.samples;
  if (s.empty()) return track;

  auto displacement = [&](std::size_t i) {
    return std::hypot(s[i].position.x - s[i - 1].position.x,
                      s[i].position.y - s[i - 1].position.y);
  };
  auto raw_heading = [&](std::size_t i) {
    return heading_deg(s[i].position.x - s[i - 1].position.x,
                       s[i].position.y - s[i - 1].position.y);
  };

  double initial = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (displacement(i) >= cfg.standstill_gate_m) {
      initial = raw_heading(i);
      break;
    }
  }

  s[0].theta_base = initial;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double prev = s[i - 1].theta_base;
    if (displacement(i) < cfg.standstill_gate_m) {
      s[i].theta_base = prev;
    } else {
      s[i].theta_base =
          wrap_deg(prev + cfg.heading_smoothing_alpha * shortest_diff(raw_heading(i), prev));
    }
  }
  return track;
}

double rms_acceleration(std::span<const geometry::CourtPoint> positions, double fps) {
  if (positions.size() < 3) {
    throw Error(ErrorCode::TooShort, "rms_acceleration needs at least 3 frames");
  }
  double sum_sq = 0.0;
  for (std::size_t i = 1; i + 1 < positions.size(); ++i) {
    const double ax = (positions[i + 1].x - 2.0 * positions[i].x + positions[i - 1].x) * fps * fps;
    const double ay = (positions[i + 1].y - 2.0 * positions[i].y + positions[i - 1].y) * fps * fps;
    sum_sq += ax * ax + ay * ay;
  }
  return std::sqrt(sum_sq / static_cast<double>(positions.size() - 2));
}

double rms_acceleration(const SmoothedTrack& track, double fps) {
  std::vector<geometry::CourtPoint> positions;
  positions.reserve(track.samples.size());
  for (const auto& s : track.samples) positions.push_back(s.position);
  return rms_acceleration(positions, fps);
}

}  // namespace bridge::smoothing
