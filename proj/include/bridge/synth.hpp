#pragma once

#include "bridge/geometry.hpp"
#include "bridge/ingest.hpp"
#include "bridge/possession.hpp"
#include "bridge/scene.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bridge::synth {

using ingest::TrackId;

struct Waypoint {
  double t = 0.0;  // seconds
  geometry::CourtPoint position;
  /// Raw trunk yaw relative to the heading, and raw head yaw relative to the
  /// raw trunk yaw. Both degrees, linearly interpolated between waypoints.
  double trunk_offset_deg = 0.0;
  double head_offset_deg = 0.0;
};

struct ScriptPlayer {
  TrackId track_id = 0;
  ingest::Team team = ingest::Team::A;
  double points = 1.0;
  std::vector<Waypoint> waypoints;
};

struct BallHold {
  TrackId holder = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct NoiseModel {
  double pixel_sigma = 0.0;
  double dropout_prob = 0.0;
  std::uint64_t seed = 1;
};

struct PlayScript {
  std::string name;
  double duration_s = 0.0;
  double fps = 30.0;
  ingest::Team offense_team = ingest::Team::A;
  std::string court_template = "NBA";
  std::vector<ScriptPlayer> players;
  /// Disjoint, chronological. Consecutive holds by the same player are
  /// dribbles; the ball leaves the holder's box between them.
  std::vector<BallHold> ball_schedule;
  /// After the last hold the ball flies to the nearest basket and stays;
  /// otherwise the last holder keeps it.
  bool terminal_shot = false;
  /// Ground-truth image -> court camera.
  geometry::Homography camera;
  NoiseModel noise;

  void validate() const;  // throws InvalidScript
  std::size_t frame_count() const noexcept;
};

/// Team lineup used when a script leaves points out: two low, one mid and two
/// high pointers per team, shuffled by the script seed.
inline constexpr double kDefaultLineup[5] = {1.0, 2.0, 3.0, 4.0, 4.0};

PlayScript parse_script(const std::string& text);
PlayScript load_script_file(const std::string& path);

struct GeneratedPlay {
  scene::SceneDocument truth;
  ingest::Sequence sequence;
  /// Ground-truth possession, frame-indexed.
  std::vector<possession::PossessionInterval> holds;
};

/// Renders the script into a noisy detection sequence plus its ground truth.
/// Deterministic for a fixed script (including seed).
GeneratedPlay generate_play(const PlayScript& script);

/// Ball diameter used for image boxes.
inline constexpr double kBallDiameterM = 0.24;
/// Seated player box: 1.4 m tall and 0.9 m wide at seat_scale 1.
inline constexpr double kPlayerHeightM = 1.4;
inline constexpr double kPlayerWidthM = 0.9;

struct EventOffset {
  possession::GameEvent truth;
  std::int64_t offset_frames = 0;  // reconstructed minus true transit start
};

struct EvalReport {
  double position_rmse_m = 0.0;
  std::size_t position_samples = 0;
  double event_precision = 1.0;
  double event_recall = 1.0;
  std::size_t truth_events = 0;
  std::size_t reconstructed_events = 0;
  std::size_t matched_events = 0;
  std::size_t orientation_violation_count = 0;
  std::vector<EventOffset> event_offsets;
};

inline constexpr std::int64_t kEventToleranceFrames = 10;

/// Compares a reconstruction to ground truth. Throws DocumentMismatch when fps
/// or frame counts differ.
EvalReport evaluate(const scene::SceneDocument& truth, const scene::SceneDocument& reconstructed);

std::string report_to_json(const EvalReport& report);

}  // namespace bridge::synth
