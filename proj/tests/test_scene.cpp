#include "bridge/error.hpp"
#include "bridge/ingest.hpp"
#include "bridge/pipeline.hpp"
#include "bridge/scene.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

using namespace bridge;
using namespace bridge::scene;

namespace {

std::string fixture(const std::string& rel) { return std::string(BRIDGE_FIXTURE_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

SceneDocument reconstructed(const std::string& trk) {
  const auto seq = ingest::parse_sequence_file(fixture(trk));
  return reconstruct(seq, PipelineConfig{}).document;
}

RosterEntry entry(TrackId id, ingest::Team team, double points) {
  return {id, team, embodiment::profile_for_points(points)};
}

SceneDocument roster_only(const std::vector<double>& team_a) {
  SceneDocument doc;
  doc.court = {"NBA", 28.65, 15.24};
  TrackId id = 1;
  for (double p : team_a) doc.roster.push_back(entry(id++, ingest::Team::A, p));
  for (double p : {1.0, 2.0, 3.0, 4.0, 4.0}) doc.roster.push_back(entry(id++, ingest::Team::B, p));
  return doc;
}

std::size_t count(const std::vector<LintWarning>& w, LintKind k) {
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [&](const auto& x) { return x.kind == k; }));
}

}  // namespace

TEST_CASE("golden two-frame scene is byte-identical") {
  const auto doc = reconstructed("trk/golden_2frame.trk");
  CHECK(serialize_scene(doc) == slurp(fixture("scenes/golden_2frame.scn")));
}

TEST_CASE("serialize/parse round trip is exact") {
  for (const char* trk : {"trk/simple_pass_shot.trk", "trk/elevator.trk"}) {
    const auto doc = reconstructed(trk);
    const std::string bytes = serialize_scene(doc);
    const auto back = parse_scene(bytes);
    CHECK(back == doc);
    CHECK(serialize_scene(back) == bytes);
  }
}

TEST_CASE("scene structure of simple_pass_shot") {
  const auto doc = reconstructed("trk/simple_pass_shot.trk");
  CHECK(doc.schema_version == "bridge-scn/1");
  CHECK(doc.frames.size() == 120);
  CHECK(doc.roster.size() == 10);
  REQUIRE(doc.events.size() == 2);
  CHECK(doc.events[0].event.kind == possession::EventKind::Pass);
  CHECK(doc.events[1].event.kind == possession::EventKind::Shot);
  for (std::size_t i = 0; i < doc.frames.size(); ++i) {
    const auto& f = doc.frames[i];
    CHECK(f.index == static_cast<std::int64_t>(i));
    for (const auto& p : f.players) {
      CHECK(p.theta_base > -180.0);
      CHECK(p.theta_base <= 180.0);
      const auto* r = doc.find_player(p.track_id);
      REQUIRE(r != nullptr);
      CHECK(embodiment::satisfies_profile({p.theta_base, p.theta_trunk, p.theta_head}, r->profile, 1e-6));
    }
  }
  // Transit samples cover the transit window and stay between hand height and apex.
  for (const auto& e : doc.events) {
    CHECK_FALSE(e.samples.empty());
    for (const auto& s : e.samples) {
      CHECK(s.frame >= e.event.transit_start_frame);
      CHECK(s.frame <= e.event.transit_end_frame);
      CHECK(s.height_m >= kHandHeightM - 1e-9);
      CHECK(s.height_m <= kShotApexM + 1e-9);
    }
  }
}

TEST_CASE("quantization") {
  CHECK(quantize(1.23456789) == 1.234568);
  CHECK(quantize(-1e-9) == 0.0);
  CHECK_FALSE(std::signbit(quantize(-1e-9)));
  CHECK(quantize_angle(-180.0) == 180.0);
  CHECK(quantize_angle(540.0) == 180.0);
  CHECK(quantize_angle(-190.0) == 170.0);
  CHECK(transit_height(0.0, kPassApexM) == kHandHeightM);
  CHECK(transit_height(1.0, kPassApexM) == kHandHeightM);
  CHECK(transit_height(0.5, kPassApexM) == doctest::Approx(kPassApexM));
}

TEST_CASE("malformed scene documents") {
  const std::string good = serialize_scene(reconstructed("trk/golden_2frame.trk"));
  auto mutate = [&](auto&& fn) {
    auto j = nlohmann::ordered_json::parse(good);
    fn(j);
    return j.dump();
  };
  CHECK(code_of([&] { parse_scene("not json"); }) == ErrorCode::MalformedScene);
  CHECK(code_of([&] { parse_scene(mutate([](auto& j) { j["schema_version"] = "bridge-scn/9"; })); }) ==
        ErrorCode::MalformedScene);
  CHECK(code_of([&] { parse_scene(mutate([](auto& j) { j.erase("fps"); })); }) == ErrorCode::MalformedScene);
  CHECK(code_of([&] { parse_scene(mutate([](auto& j) { j["frame_count"] = 3; })); }) ==
        ErrorCode::MalformedScene);
  CHECK(code_of([&] { parse_scene(mutate([](auto& j) { j["frames"][1]["index"] = 5; })); }) ==
        ErrorCode::MalformedScene);
  CHECK(code_of([&] { parse_scene(mutate([](auto& j) { j["roster"][0]["points"] = 5.0; })); }) ==
        ErrorCode::MalformedScene);
  CHECK(code_of([&] { parse_scene(mutate([](auto& j) { j["frames"][0]["players"][0]["track_id"] = 999; })); }) ==
        ErrorCode::MalformedScene);
  try {
    parse_scene(mutate([](auto& j) { j["frames"][0]["players"][0]["x"] = "far"; }));
    FAIL("expected MalformedScene");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("/frames/0/players/0/x") != std::string::npos);
  }
  CHECK(code_of([] { parse_scene_file("/nonexistent/scene.scn"); }) == ErrorCode::Io);
}

TEST_CASE("build_scene rejects inconsistent inputs") {
  SceneInputs in;
  CHECK(code_of([&] { build_scene(in); }) == ErrorCode::InconsistentInputs);
}

TEST_CASE("lint: team point cap") {
  SUBCASE("14.0 is at the cap") {
    const auto w = lint_scene(roster_only({1.0, 2.0, 3.0, 4.0, 4.0}));
    CHECK(count(w, LintKind::TeamPointCap) == 0);
  }
  SUBCASE("14.5 exceeds it") {
    const auto w = lint_scene(roster_only({1.0, 2.0, 3.0, 4.0, 4.5}));
    REQUIRE(count(w, LintKind::TeamPointCap) == 1);
    const auto it = std::find_if(w.begin(), w.end(), [](const auto& x) { return x.kind == LintKind::TeamPointCap; });
    CHECK(it->team == ingest::Team::A);
    CHECK(it->message.find("14.5") != std::string::npos);
  }
  SUBCASE("custom cap") {
    LintOptions o;
    o.team_point_cap = 15.0;
    CHECK(count(lint_scene(roster_only({1.0, 2.0, 3.0, 4.0, 4.5}), o), LintKind::TeamPointCap) == 0);
  }
  SUBCASE("team size") {
    CHECK(count(lint_scene(roster_only({1.0, 2.0, 3.0, 4.0})), LintKind::TeamSize) == 1);
  }
}

TEST_CASE("lint: per-frame checks") {
  auto doc = roster_only({1.0, 2.0, 3.0, 4.0, 4.0});
  for (int i = 0; i < 3; ++i) {
    SceneFrame f;
    f.index = i;
    f.timestamp_s = i / 30.0;
    ScenePlayerFrame a;
    a.track_id = 1;
    a.position = {0.0, 0.0};
    ScenePlayerFrame b;
    b.track_id = 2;
    b.position = {1.0, 1.0};
    f.players = {a, b};
    doc.frames.push_back(f);
  }
  CHECK(lint_scene(doc).empty());

  doc.frames[1].players[0].position = {3.0, 0.0};  // 3 m in one frame at 30 fps
  auto w = lint_scene(doc);
  CHECK(count(w, LintKind::Teleport) == 2);

  doc.frames[1].players[0].position = {0.0, 0.0};
  doc.frames[2].players[1].position = {0.0, 7.62 + 2.5};
  doc.frames[2].players[0].has_ball = true;
  doc.frames[2].players[1].has_ball = true;
  w = lint_scene(doc);
  CHECK(count(w, LintKind::OutOfBounds) == 1);
  CHECK(count(w, LintKind::MultipleHolders) == 1);
  CHECK(count(w, LintKind::Teleport) == 1);
}

TEST_CASE("resolve_profiles prefers per-record points over the roster") {
  const auto seq = ingest::parse_sequence_file(fixture("trk/two_frame.trk"));
  RosterConfig roster;
  roster.points[7] = 4.0;
  const auto out = resolve_profiles(seq, roster);
  REQUIRE(out.count(7) == 1);
  CHECK(out.at(7).points == 2.5);
}
