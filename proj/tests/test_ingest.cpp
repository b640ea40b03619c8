#include "bridge/error.hpp"
#include "bridge/ingest.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace bridge;
using namespace bridge::ingest;

namespace {

const char* kHeader = R"({"format":"bridge-trk","version":1,"fps":30,"offense_team":"A"})";

std::string frame_line(std::int64_t index, double t, const std::string& players = "[]",
                       const std::string& ball = "null") {
  std::ostringstream s;
  s << R"({"frame_index":)" << index << R"(,"timestamp_s":)" << t << R"(,"players":)" << players
    << R"(,"ball":)" << ball << "}";
  return s.str();
}

Sequence parse(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  return parse_sequence(in, warnings);
}

ErrorCode code_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

std::string player(TrackId id, const char* team, double cx, double cy) {
  std::ostringstream s;
  s << R"({"track_id":)" << id << R"(,"team":")" << team << R"(","bbox":{"x":)" << cx - 5
    << R"(,"y":)" << cy - 10 << R"(,"w":10,"h":20}})";
  return s.str();
}

// Track 1 present on every frame except `absent`.
Sequence with_absence(int frames, std::int64_t absent_from, std::int64_t absent_to) {
  Sequence seq;
  for (int f = 0; f < frames; ++f) {
    FrameRecord r;
    r.frame_index = f;
    r.timestamp_s = f / 30.0;
    if (f < absent_from || f > absent_to) {
      PlayerDetection d;
      d.track_id = 1;
      d.bbox = BoundingBox::from_center({static_cast<double>(f), 0.0}, 10, 20);
      r.players.push_back(d);
    }
    seq.frames.push_back(r);
  }
  return seq;
}

}  // namespace

TEST_CASE("header only gives an empty sequence") {
  const auto seq = parse(std::string(kHeader) + "\n");
  CHECK(seq.frames.empty());
  CHECK(seq.fps == 30.0);
  CHECK(seq.offense_team == Team::A);
  CHECK(seq.court_template == "NBA");
}

TEST_CASE("hand-authored two-frame file") {
  const auto seq = parse_sequence_file(std::string(BRIDGE_FIXTURE_DIR) + "/trk/two_frame.trk");
  CHECK(seq.fps == 25.0);
  CHECK(seq.offense_team == Team::B);
  CHECK(seq.court_template == "FIBA");
  CHECK(seq.metadata.at("source") == "hand-authored");
  REQUIRE(seq.frames.size() == 2);

  const auto& f0 = seq.frames[0];
  CHECK(f0.frame_index == 0);
  CHECK(f0.timestamp_s == 0.0);
  REQUIRE(f0.players.size() == 1);
  const auto& p = f0.players[0];
  CHECK(p.track_id == 7);
  CHECK(p.team == Team::B);
  CHECK(p.bbox == BoundingBox{100.0, 200.0, 40.0, 80.0});
  CHECK(p.classification_points == 2.5);
  CHECK(p.trunk_yaw_raw == 30.0);
  CHECK(p.head_yaw_raw == -15.5);
  REQUIRE(f0.ball.has_value());
  CHECK(*f0.ball == BoundingBox{110.0, 230.0, 12.0, 12.0});
  CHECK_FALSE(f0.court_keypoints.has_value());

  const auto& f1 = seq.frames[1];
  CHECK(f1.timestamp_s == 0.04);
  CHECK(f1.players[0].bbox.x == 102.5);
  CHECK(f1.players[0].trunk_yaw_raw == 180.0);
  CHECK_FALSE(f1.players[0].head_yaw_raw.has_value());
  CHECK_FALSE(f1.ball.has_value());
  REQUIRE(f1.court_keypoints.has_value());
  CHECK(f1.court_keypoints->at(0).landmark == "corner_tl");
  CHECK(f1.court_keypoints->at(0).image == geometry::ImagePoint{10.0, 20.0});
}

TEST_CASE("frame_index 0,2,1 fails at line 4") {
  const std::string text = std::string(kHeader) + "\n" + frame_line(0, 0.0) + "\n" +
                           frame_line(2, 0.1) + "\n" + frame_line(1, 0.2) + "\n";
  try {
    parse(text);
    FAIL("expected NonMonotoneFrames");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotoneFrames);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("validation errors") {
  const std::string h = std::string(kHeader) + "\n";
  CHECK(code_of("") == ErrorCode::MissingHeader);
  CHECK(code_of(R"({"format":"other","version":1,"fps":30,"offense_team":"A"})") ==
        ErrorCode::MissingHeader);
  CHECK(code_of(h + frame_line(0, 0.0) + "\n" + frame_line(1, 0.0) + "\n") ==
        ErrorCode::NonMonotoneFrames);
  CHECK(code_of(h + frame_line(0, 0.0, "[" + player(1, "A", 0, 0) + "," + player(1, "A", 5, 5) + "]")) ==
        ErrorCode::DuplicateTrackId);
  CHECK(code_of(h + "{not json}\n") == ErrorCode::MalformedRecord);
  CHECK(code_of(h + frame_line(0, 0.0, R"([{"track_id":1,"team":"C","bbox":{"x":0,"y":0,"w":1,"h":1}}])")) ==
        ErrorCode::MalformedRecord);
  CHECK(code_of(h + frame_line(0, 0.0, R"([{"track_id":1,"team":"A","bbox":{"x":0,"y":0,"w":-1,"h":1}}])")) ==
        ErrorCode::MalformedRecord);
  CHECK(code_of(h + frame_line(0, 0.0,
                               R"([{"track_id":1,"team":"A","bbox":{"x":0,"y":0,"w":1,"h":1},"classification_points":2.2}])")) ==
        ErrorCode::MalformedRecord);
  CHECK(code_of(h + frame_line(0, 0.0,
                               R"([{"track_id":1,"team":"A","bbox":{"x":0,"y":0,"w":1,"h":1},"trunk_yaw_raw":-180}])")) ==
        ErrorCode::MalformedRecord);
  CHECK(code_of(h + frame_line(0, 0.0, "[" + player(1, "A", 0, 0) + "]") + "\n" +
                frame_line(1, 0.1, "[" + player(1, "B", 0, 0) + "]")) == ErrorCode::MalformedRecord);
}

TEST_CASE("unknown keys are reported, not fatal") {
  std::vector<std::string> warnings;
  const std::string text = std::string(R"({"format":"bridge-trk","version":1,"fps":30,"offense_team":"A","camera":"x"})") +
                           "\n" + R"({"frame_index":0,"timestamp_s":0,"players":[],"ball":null,"weather":"sunny"})" + "\n";
  const auto seq = parse(text, &warnings);
  CHECK(seq.frames.size() == 1);
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[1].find("weather") != std::string::npos);
}

TEST_CASE("serialize then parse is the identity") {
  const auto seq = parse_sequence_file(std::string(BRIDGE_FIXTURE_DIR) + "/trk/two_frame.trk");
  CHECK(parse(serialize_sequence(seq)) == seq);

  Sequence built;
  built.fps = 29.97;
  built.offense_team = Team::B;
  built.pixel_sigma = 1.5;
  built.correspondences.push_back({{1.0 / 3.0, 2.0}, {-1.25, 7.0}, std::string("corner_tl")});
  built.correspondences.push_back({{4.0, 5.0}, {6.0, 7.0}, std::nullopt});
  FrameRecord r;
  r.frame_index = 3;
  r.timestamp_s = 0.1000000001;
  PlayerDetection d;
  d.track_id = -4;
  d.team = Team::B;
  d.bbox = {0.1, 0.2, 0.30000000000000004, 1e-7};
  d.action = "hook_shot";
  d.synthetic = true;
  r.players.push_back(d);
  built.frames.push_back(r);
  CHECK(parse(serialize_sequence(built)) == built);
}

TEST_CASE("track_table") {
  SUBCASE("always present") {
    const auto t = track_table(with_absence(30, 100, 100));
    REQUIRE(t.size() == 1);
    CHECK(t.at(1).gaps.empty());
    CHECK(t.at(1).first_frame == 0);
    CHECK(t.at(1).last_frame == 29);
    CHECK(t.at(1).present_frames == 30);
  }
  SUBCASE("absent 10-14") {
    const auto t = track_table(with_absence(30, 10, 14));
    REQUIRE(t.at(1).gaps.size() == 1);
    CHECK(t.at(1).gaps[0] == std::pair<std::int64_t, std::int64_t>{10, 14});
    CHECK(t.at(1).present_frames == 25);
  }
  SUBCASE("two teams") {
    auto seq = with_absence(3, 100, 100);
    PlayerDetection d;
    d.track_id = 9;
    d.team = Team::B;
    seq.frames[1].players.push_back(d);
    const auto t = track_table(seq);
    REQUIRE(t.size() == 2);
    CHECK(t.at(1).team == Team::A);
    CHECK(t.at(9).team == Team::B);
  }
}

TEST_CASE("property: presence runs plus gaps partition the span") {
  for (int from = 1; from < 20; from += 3) {
    for (int len = 1; len < 6; ++len) {
      const auto seq = with_absence(25, from, from + len - 1);
      const auto table = track_table(seq);
      const auto& s = table.at(1);
      std::size_t gap_total = 0;
      for (const auto& [a, b] : s.gaps) gap_total += static_cast<std::size_t>(b - a + 1);
      CHECK(s.present_frames + gap_total == static_cast<std::size_t>(s.last_frame - s.first_frame + 1));
    }
  }
}

TEST_CASE("interpolate_gaps") {
  SUBCASE("two-frame gap is filled linearly") {
    Sequence seq;
    for (int f = 0; f < 4; ++f) {
      FrameRecord r;
      r.frame_index = f;
      r.timestamp_s = f * 0.1;
      if (f == 0 || f == 3) {
        PlayerDetection d;
        d.track_id = 1;
        d.bbox = BoundingBox::from_center({f == 0 ? 0.0 : 3.0, 0.0}, 2.0, 2.0);
        d.trunk_yaw_raw = f == 0 ? 170.0 : -170.0;
        r.players.push_back(d);
      }
      seq.frames.push_back(r);
    }
    const auto out = interpolate_gaps(seq, 5);
    REQUIRE(out.frames[1].players.size() == 1);
    CHECK(out.frames[1].players[0].synthetic);
    CHECK(out.frames[1].players[0].bbox.center().u == doctest::Approx(1.0));
    CHECK(out.frames[2].players[0].bbox.center().u == doctest::Approx(2.0));
    CHECK(out.frames[1].players[0].bbox.center().v == doctest::Approx(0.0));
    // shorter arc through 180
    CHECK(std::abs(*out.frames[1].players[0].trunk_yaw_raw) > 170.0);
  }
  SUBCASE("long gaps stay open, boundary gaps are filled") {
    const auto seq10 = with_absence(30, 10, 19);
    CHECK(interpolate_gaps(seq10, 5) == seq10);

    const auto seq5 = with_absence(30, 10, 14);
    const auto out = interpolate_gaps(seq5, 5);
    for (int f = 10; f <= 14; ++f) CHECK(out.frames[static_cast<std::size_t>(f)].players.size() == 1);
    CHECK(track_table(out).at(1).gaps.empty());
  }
  SUBCASE("non-gap records and frame count are untouched") {
    const auto seq = with_absence(30, 4, 6);
    const auto out = interpolate_gaps(seq, 5);
    CHECK(out.frames.size() == seq.frames.size());
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
      for (const auto& p : seq.frames[f].players) {
        REQUIRE(out.frames[f].find(p.track_id) != nullptr);
        CHECK(*out.frames[f].find(p.track_id) == p);
      }
    }
  }
}
