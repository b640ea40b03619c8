#pragma once

#include "bridge/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bridge::ingest {

using TrackId = std::int64_t;

enum class Team { A, B };

std::string to_string(Team team);
Team team_from_string(const std::string& s);  // throws MalformedRecord

/// Pixel box: top-left corner plus width/height.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
  geometry::ImagePoint center() const noexcept { return {x + w / 2.0, y + h / 2.0}; }
  static BoundingBox from_center(geometry::ImagePoint c, double w, double h) noexcept {
    return {c.u - w / 2.0, c.v - h / 2.0, w, h};
  }
  bool operator==(const BoundingBox&) const = default;
};

struct PlayerDetection {
  TrackId track_id = 0;
  Team team = Team::A;
  BoundingBox bbox;
  std::optional<double> classification_points;
  /// Court-frame yaws in degrees, (-180, 180].
  std::optional<double> trunk_yaw_raw;
  std::optional<double> head_yaw_raw;
  /// Upstream action label (e.g. "hook_shot"); abstracted at scene assembly.
  std::optional<std::string> action;
  /// Set on records filled in by interpolate_gaps.
  bool synthetic = false;

  bool operator==(const PlayerDetection&) const = default;
};

struct KeypointObservation {
  std::string landmark;
  geometry::ImagePoint image;
  bool operator==(const KeypointObservation&) const = default;
};

struct FrameRecord {
  std::int64_t frame_index = 0;
  double timestamp_s = 0.0;
  std::vector<PlayerDetection> players;
  std::optional<BoundingBox> ball;
  std::optional<std::vector<KeypointObservation>> court_keypoints;

  const PlayerDetection* find(TrackId id) const noexcept;
  bool operator==(const FrameRecord&) const = default;
};

struct Sequence {
  double fps = 30.0;
  Team offense_team = Team::A;
  std::string court_template = "NBA";
  /// Clip-wide calibration. When empty, per-frame court_keypoints are used.
  std::vector<geometry::Correspondence> correspondences;
  /// Localization noise the detector reports for its boxes, in pixels.
  std::optional<double> pixel_sigma;
  std::map<std::string, std::string> metadata;
  std::vector<FrameRecord> frames;

  /// Position of `frame_index` in `frames`, if present.
  std::optional<std::size_t> position_of(std::int64_t frame_index) const;
  bool operator==(const Sequence&) const = default;
};

/// Parses the line-delimited "bridge-trk" v1 format. Unknown keys are ignored
/// and reported through `warnings` when given.
Sequence parse_sequence(std::istream& in, std::vector<std::string>* warnings = nullptr);
Sequence parse_sequence_file(const std::string& path,
                             std::vector<std::string>* warnings = nullptr);

void serialize_sequence(const Sequence& seq, std::ostream& out);
std::string serialize_sequence(const Sequence& seq);

/// Enforces every Sequence invariant; throws the matching ErrorCode. Called
/// by parse_sequence, exposed for programmatically built sequences.
void validate_sequence(const Sequence& seq);

bool valid_classification_points(double points) noexcept;

struct TrackSummary {
  Team team = Team::A;
  std::optional<double> classification_points;
  std::int64_t first_frame = 0;
  std::int64_t last_frame = 0;
  std::size_t present_frames = 0;
  /// Inclusive frame_index ranges inside [first_frame, last_frame] where the
  /// track has no record.
  std::vector<std::pair<std::int64_t, std::int64_t>> gaps;

  bool operator==(const TrackSummary&) const = default;
};

std::map<TrackId, TrackSummary> track_table(const Sequence& seq);

/// Fills gaps of at most `max_gap_frames` missing frames by linear
/// interpolation of bbox center and size (and yaws along the shorter arc).
/// Filled records are appended to their frame and flagged synthetic.
Sequence interpolate_gaps(const Sequence& seq, int max_gap_frames);

}  // namespace bridge::ingest
