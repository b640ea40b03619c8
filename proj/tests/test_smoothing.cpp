#include "bridge/angles.hpp"
#include "bridge/error.hpp"
#include "bridge/smoothing.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bridge;
using namespace bridge::smoothing;

namespace {

std::vector<TrackPoint> line(std::size_t n, double x0, double y0, double dx, double dy) {
  std::vector<TrackPoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    pts.push_back({static_cast<std::int64_t>(k), {x0 + dx * k, y0 + dy * k}, false, std::nullopt});
  }
  return pts;
}

SmoothedTrack from_positions(const std::vector<geometry::CourtPoint>& ps) {
  SmoothedTrack t;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    TrackSample s;
    s.frame_index = static_cast<std::int64_t>(k);
    s.position = ps[k];
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace

TEST_CASE("single point passes through") {
  const std::vector<TrackPoint> pts{{4, {1.5, -2.0}, false, std::nullopt}};
  const auto out = smooth_trajectory(pts, 30.0, {});
  REQUIRE(out.samples.size() == 1);
  CHECK(out.samples[0].position == geometry::CourtPoint{1.5, -2.0});
  CHECK(out.samples[0].velocity.vx == 0.0);
  CHECK(out.samples[0].velocity.vy == 0.0);
  CHECK(out.samples[0].frame_index == 4);
}

TEST_CASE("stationary noiseless track is a fixed point") {
  const auto out = smooth_trajectory(line(60, 3.0, 4.0, 0.0, 0.0), 30.0, {});
  for (const auto& s : out.samples) {
    CHECK(std::abs(s.position.x - 3.0) < 1e-6);
    CHECK(std::abs(s.position.y - 4.0) < 1e-6);
    CHECK(std::abs(s.velocity.vx) < 1e-6);
    CHECK(std::abs(s.velocity.vy) < 1e-6);
  }
}

TEST_CASE("constant velocity 1.5 m/s is reproduced after burn-in") {
  const double step = 1.5 / 30.0;
  const auto pts = line(90, -5.0, 1.0, step, 0.0);
  const auto out = smooth_trajectory(pts, 30.0, {});
  for (std::size_t k = 10; k < pts.size(); ++k) {
    CHECK(std::abs(out.samples[k].position.x - pts[k].position.x) < 1e-3);
    CHECK(std::abs(out.samples[k].position.y - pts[k].position.y) < 1e-3);
    CHECK(out.samples[k].velocity.vx == doctest::Approx(1.5).epsilon(1e-2));
  }
}

TEST_CASE("errors") {
  try {
    smooth_trajectory(std::vector<TrackPoint>{}, 30.0, {});
    FAIL("expected EmptyTrack");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTrack);
  }
  auto pts = line(5, 0, 0, 1, 0);
  pts[3].frame_index = 2;
  CHECK_THROWS_AS(smooth_trajectory(pts, 30.0, {}), Error);
  CHECK_THROWS_AS(rms_acceleration(std::vector<geometry::CourtPoint>{{0, 0}, {1, 1}}, 30.0), Error);

  SmoothingConfig bad;
  bad.measurement_sigma_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.heading_smoothing_alpha = 1.2;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("gaps and synthetic points") {
  auto pts = line(30, 0.0, 0.0, 0.05, 0.0);
  pts.erase(pts.begin() + 10, pts.begin() + 14);  // dt spans several frames
  pts[15].synthetic = true;
  pts[15].position = {100.0, 100.0};  // never used as a measurement
  const auto out = smooth_trajectory(pts, 30.0, {});
  REQUIRE(out.samples.size() == pts.size());
  CHECK(out.samples[15].synthetic);
  CHECK(std::abs(out.samples[15].position.x - 0.05 * pts[15].frame_index) < 0.01);
}

TEST_CASE("per-point measurement sigma tightens the fit") {
  std::vector<geometry::CourtPoint> truth;
  std::vector<TrackPoint> loose, tight;
  for (int k = 0; k < 60; ++k) {
    const double t = k / 30.0;
    const geometry::CourtPoint p{3.0 * std::cos(t), 3.0 * std::sin(t)};
    truth.push_back(p);
    loose.push_back({k, p, false, std::nullopt});
    tight.push_back({k, p, false, 0.005});
  }
  const auto a = smooth_trajectory(loose, 30.0, {});
  const auto b = smooth_trajectory(tight, 30.0, {});
  double ea = 0, eb = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    ea = std::max(ea, geometry::distance(a.samples[k].position, truth[k]));
    eb = std::max(eb, geometry::distance(b.samples[k].position, truth[k]));
  }
  CHECK(eb < ea / 5.0);
}

TEST_CASE("heading conventions") {
  const SmoothingConfig cfg;
  auto heading_of = [&](double dx, double dy) {
    std::vector<geometry::CourtPoint> ps;
    for (int k = 0; k < 10; ++k) ps.push_back({dx * k, dy * k});
    return heading_from_track(from_positions(ps), cfg);
  };
  for (const auto& s : heading_of(1, 0).samples) CHECK(s.theta_base == 0.0);
  for (const auto& s : heading_of(0, 1).samples) CHECK(s.theta_base == 90.0);
  for (const auto& s : heading_of(-1, 0).samples) CHECK(s.theta_base == 180.0);

  SUBCASE("standstill holds and the first frame looks ahead") {
    std::vector<geometry::CourtPoint> ps{{0, 0}, {0.01, 0}, {0.01, 0}, {0.01, 1.0}, {0.01, 1.0}};
    const auto t = heading_from_track(from_positions(ps), cfg);
    CHECK(t.samples[0].theta_base == 90.0);
    CHECK(t.samples[1].theta_base == 90.0);
    CHECK(t.samples[4].theta_base == 90.0);
  }
  SUBCASE("no movement at all defaults to zero") {
    const auto t = heading_from_track(from_positions({{1, 1}, {1, 1}, {1, 1}}), cfg);
    for (const auto& s : t.samples) CHECK(s.theta_base == 0.0);
  }
  SUBCASE("blending crosses the seam on the short side") {
    std::vector<geometry::CourtPoint> ps{{0, 0}, {-1, 0.1}, {-2, 0.1}, {-3, 0.0}, {-4, -0.1}, {-5, -0.1}};
    SmoothingConfig c;
    c.heading_smoothing_alpha = 0.5;
    const auto t = heading_from_track(from_positions(ps), c);
    for (const auto& s : t.samples) CHECK(std::abs(s.theta_base) > 170.0);
  }
}

TEST_CASE("property: theta in range, alpha=1 tracks the raw displacement angle") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> step(0.0, 0.3);
  SmoothingConfig cfg;
  cfg.heading_smoothing_alpha = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<geometry::CourtPoint> ps{{0, 0}};
    for (int k = 0; k < 60; ++k) ps.push_back({ps.back().x + step(rng), ps.back().y + step(rng)});
    const auto t = heading_from_track(from_positions(ps), cfg);
    double last_raw = t.samples[0].theta_base;
    for (std::size_t k = 0; k < t.samples.size(); ++k) {
      const double th = t.samples[k].theta_base;
      CHECK(th > -180.0);
      CHECK(th <= 180.0);
      if (k == 0) continue;
      const double dx = ps[k].x - ps[k - 1].x, dy = ps[k].y - ps[k - 1].y;
      if (std::hypot(dx, dy) >= cfg.standstill_gate_m) {
        const double raw = heading_deg(dx, dy);
        CHECK(std::abs(shortest_diff(th, t.samples[k - 1].theta_base)) <=
              std::abs(shortest_diff(raw, last_raw)) + 1e-6);
        last_raw = raw;
      }
    }
  }
}

TEST_CASE("property: translation and rotation equivariance") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TrackPoint> pts, shifted, rotated;
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (int k = 0; k < 40; ++k) {
      const geometry::CourtPoint p{0.05 * k + noise(rng), 0.02 * k + noise(rng)};
      pts.push_back({k, p, false, std::nullopt});
      shifted.push_back({k, {p.x + 3.25, p.y - 1.5}, false, std::nullopt});
      rotated.push_back({k, {c * p.x - s * p.y, s * p.x + c * p.y}, false, std::nullopt});
    }
    const auto a = smooth_trajectory(pts, 30.0, {});
    const auto b = smooth_trajectory(shifted, 30.0, {});
    const auto r = smooth_trajectory(rotated, 30.0, {});
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto& p = a.samples[k].position;
      CHECK(std::abs(b.samples[k].position.x - (p.x + 3.25)) < 1e-9);
      CHECK(std::abs(b.samples[k].position.y - (p.y - 1.5)) < 1e-9);
      CHECK(std::abs(r.samples[k].position.x - (c * p.x - s * p.y)) < 1e-6);
      CHECK(std::abs(r.samples[k].position.y - (s * p.x + c * p.y)) < 1e-6);
    }
  }
}

TEST_CASE("rms_acceleration") {
  std::vector<geometry::CourtPoint> cv;
  for (int k = 0; k < 20; ++k) cv.push_back({0.05 * k, -0.01 * k});
  CHECK(rms_acceleration(cv, 30.0) < 1e-9);

  // One 0.1 m kink at index 5: second differences +0.1, -0.2, +0.1 around it.
  std::vector<geometry::CourtPoint> kink(11, {0.0, 0.0});
  kink[5].y = 0.1;
  const double expected = std::sqrt((0.01 + 0.04 + 0.01) * std::pow(30.0, 4) / 9.0);
  CHECK(rms_acceleration(kink, 30.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("smoothing reduces rms acceleration on noisy tracks") {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> noise(0.0, 0.1);
  int better = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TrackPoint> pts;
    std::vector<geometry::CourtPoint> raw;
    for (int k = 0; k < 90; ++k) {
      const geometry::CourtPoint p{0.05 * k + noise(rng), noise(rng)};
      pts.push_back({k, p, false, std::nullopt});
      raw.push_back(p);
    }
    const auto out = smooth_trajectory(pts, 30.0, {});
    if (rms_acceleration(out, 30.0) < 0.5 * rms_acceleration(raw, 30.0)) ++better;
  }
  CHECK(better >= 190);
}
