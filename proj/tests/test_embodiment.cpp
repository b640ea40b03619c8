#include "bridge/angles.hpp"
#include "bridge/embodiment.hpp"
#include "bridge/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bridge;
using namespace bridge::embodiment;

namespace {

// Signed distance between two angles, robust to the representation.
double angle_gap(double a, double b) { return std::abs(shortest_diff(a, b)); }

smoothing::SmoothedTrack constant_heading(std::size_t n, double theta) {
  smoothing::SmoothedTrack t;
  for (std::size_t k = 0; k < n; ++k) {
    smoothing::TrackSample s;
    s.frame_index = static_cast<std::int64_t>(k);
    s.theta_base = theta;
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace

TEST_CASE("angle helpers") {
  CHECK(shortest_diff(10, 10) == 0.0);
  CHECK(shortest_diff(170, -170) == -20.0);
  CHECK(shortest_diff(-90, 90) == 180.0);
  CHECK(wrap_deg(-180.0) == 180.0);
  CHECK(wrap_deg(540.0) == 180.0);
  CHECK(wrap_deg(-190.0) == 170.0);
  CHECK(heading_deg(-1.0, 0.0) == 180.0);
  CHECK(heading_deg(0.0, -1.0) == -90.0);
  CHECK(lerp_angle(170.0, -170.0, 0.5) == 180.0);
}

TEST_CASE("profiles") {
  for (const double p : {1.0, 1.5, 2.0}) {
    const auto prof = profile_for_points(p);
    CHECK(prof.category == Category::Low);
    CHECK(prof.delta_max_trunk_deg == 10.0);
    CHECK(prof.delta_max_head_deg == 45.0);
    CHECK(prof.seat_scale == 0.85);
  }
  for (const double p : {2.5, 3.0}) {
    const auto prof = profile_for_points(p);
    CHECK(prof.category == Category::Mid);
    CHECK(prof.delta_max_trunk_deg == 25.0);
    CHECK(prof.delta_max_head_deg == 60.0);
  }
  for (const double p : {3.5, 4.0, 4.5}) {
    const auto prof = profile_for_points(p);
    CHECK(prof.category == Category::High);
    CHECK(prof.delta_max_trunk_deg == 45.0);
    CHECK(prof.delta_max_head_deg == 80.0);
    CHECK(prof.alpha == 1.0);
    CHECK(prof.beta == 1.0);
    CHECK(prof.seat_scale == 1.0);
  }
  for (const double bad : {0.5, 2.2, 5.0, std::nan("")}) {
    try {
      profile_for_points(bad);
      FAIL("expected InvalidPoints");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidPoints);
    }
  }
  ProfileOverrides o;
  o.delta_max_trunk_deg = 15.0;
  o.alpha = 0.5;
  const auto custom = profile_for_points(1.0, &o);
  CHECK(custom.delta_max_trunk_deg == 15.0);
  CHECK(custom.delta_max_head_deg == 45.0);
  CHECK(custom.alpha == 0.5);

  ProfileOverrides broken;
  broken.delta_max_head_deg = 0.0;
  CHECK_THROWS_AS(profile_for_points(4.0, &broken), Error);
}

TEST_CASE("map_orientation worked examples") {
  const auto low = profile_for_points(1.0);
  const auto high = profile_for_points(4.5);

  const auto a = map_orientation(0.0, {30.0, 90.0}, low);
  CHECK(a.theta_base == 0.0);
  CHECK(a.theta_trunk == 10.0);
  CHECK(a.theta_head == 55.0);

  CHECK(map_orientation(0.0, {0.0, 0.0}, high) == OrientationTriple{0.0, 0.0, 0.0});

  const auto c = map_orientation(0.0, {30.0, 60.0}, high);
  CHECK(c.theta_trunk == 30.0);
  CHECK(c.theta_head == 60.0);

  // Across the seam: base 175, raw trunk -170 is 15 deg to the left.
  const auto d = map_orientation(175.0, {-170.0, -170.0}, low);
  CHECK(d.theta_trunk == -175.0);
  CHECK(d.theta_head == -170.0);
}

TEST_CASE("map_player_sequence") {
  const auto low = profile_for_points(1.0);
  SUBCASE("neutral yaws") {
    const auto track = constant_heading(5, 42.0);
    std::vector<RawYaws> raws(5, RawYaws{42.0, 42.0});
    for (const auto& t : map_player_sequence(track, raws, low)) CHECK(t == OrientationTriple{42.0, 42.0, 42.0});
    std::vector<RawYaws> missing(5);
    for (const auto& t : map_player_sequence(track, missing, low)) CHECK(t == OrientationTriple{42.0, 42.0, 42.0});
  }
  SUBCASE("trunk ramp saturates at the low limit") {
    const auto track = constant_heading(41, 0.0);
    std::vector<RawYaws> raws;
    for (int k = 0; k <= 40; ++k) raws.push_back({static_cast<double>(k), std::nullopt});
    const auto out = map_player_sequence(track, raws, low);
    for (int k = 0; k <= 40; ++k) {
      CHECK(out[static_cast<std::size_t>(k)].theta_trunk == std::min(static_cast<double>(k), 10.0));
    }
  }
  SUBCASE("misaligned lengths") {
    const auto track = constant_heading(4, 0.0);
    std::vector<RawYaws> raws(3);
    try {
      map_player_sequence(track, raws, low);
      FAIL("expected FrameMisalignment");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FrameMisalignment);
    }
  }
}

TEST_CASE("abstract_action") {
  CHECK(abstract_action("hook_shot").label == "shot");
  CHECK(abstract_action("layup").label == "shot");
  CHECK(abstract_action("bounce_pass").label == "chest_pass");
  CHECK(abstract_action("side_step").label == "push");
  CHECK(abstract_action("back_step").label == "push");
  CHECK(abstract_action("dribble").label == "dribble");
  CHECK(abstract_action("screen").label == "screen");
  const auto unknown = abstract_action("moonwalk");
  CHECK(unknown.label == "move");
  CHECK_FALSE(unknown.known);
}

TEST_CASE("property: constraints, pass-through, monotonicity, dominance, equivariance, seams") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::uniform_real_distribution<double> gain(0.0, 2.0);
  std::uniform_int_distribution<int> pts(2, 9);
  for (int k = 0; k < 20000; ++k) {
    auto prof = profile_for_points(pts(rng) * 0.5);
    prof.alpha = gain(rng);
    prof.beta = gain(rng);
    const double base = angle(rng);
    const RawOrientation raw{angle(rng), angle(rng)};
    const auto t = map_orientation(base, raw, prof);
    REQUIRE(satisfies_profile(t, prof));

    // rotation by delta
    const double delta = angle(rng);
    const auto r = map_orientation(wrap_deg(base + delta), {wrap_deg(raw.theta_trunk_raw + delta),
                                                           wrap_deg(raw.theta_head_raw + delta)},
                                   prof);
    CHECK(angle_gap(r.theta_base, t.theta_base + delta) < 1e-9);
    CHECK(angle_gap(r.theta_trunk, t.theta_trunk + delta) < 1e-9);
    CHECK(angle_gap(r.theta_head, t.theta_head + delta) < 1e-9);
  }

  // pass-through
  const auto high = profile_for_points(4.0);
  for (int k = 0; k < 2000; ++k) {
    const double base = angle(rng);
    std::uniform_real_distribution<double> within_t(-45.0, 45.0), within_h(-80.0, 80.0);
    const double trunk = wrap_deg(base + within_t(rng));
    const double head = wrap_deg(trunk + within_h(rng));
    const auto t = map_orientation(base, {trunk, head}, high);
    CHECK(angle_gap(t.theta_trunk, trunk) < 1e-9);
    CHECK(angle_gap(t.theta_head, head) < 1e-9);
  }

  // monotone in the raw trunk offset; High dominates Low
  const auto low = profile_for_points(1.0);
  for (int b = 0; b < 20; ++b) {
    const double base = angle(rng);
    double prev = -1e9;
    for (double off = -179.5; off < 180.0; off += 0.5) {
      const RawOrientation raw{wrap_deg(base + off), 0.0};
      const double mapped = shortest_diff(map_orientation(base, raw, low).theta_trunk, base);
      CHECK(mapped >= prev - 1e-9);
      prev = mapped;
      const double hi = shortest_diff(map_orientation(base, raw, high).theta_trunk, base);
      CHECK(std::abs(hi) >= std::abs(mapped) - 1e-9);
    }
  }

  // seam continuity
  for (const double base : {179.9995, -179.9995, 180.0}) {
    for (const double trunk : {179.9995, -179.9995, 175.0, -175.0}) {
      const auto a = map_orientation(base, {trunk, trunk}, low);
      const auto b = map_orientation(base + 0.001, {trunk - 0.001, trunk + 0.001}, low);
      CHECK(angle_gap(a.theta_base, b.theta_base) < 0.01);
      CHECK(angle_gap(a.theta_trunk, b.theta_trunk) < 0.01);
      CHECK(angle_gap(a.theta_head, b.theta_head) < 0.01);
    }
  }
}
