#pragma once

#include "bridge/embodiment.hpp"
#include "bridge/geometry.hpp"
#include "bridge/ingest.hpp"
#include "bridge/possession.hpp"
#include "bridge/smoothing.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bridge::scene {

using ingest::TrackId;

inline constexpr const char* kSchemaVersion = "bridge-scn/1";
/// Positions outside the court by more than this are flagged.
inline constexpr double kCourtMarginM = 2.0;
/// Parabolic height hints for renderers.
inline constexpr double kHandHeightM = 1.0;
inline constexpr double kPassApexM = 1.5;
inline constexpr double kShotApexM = 3.0;
/// A shot reaches the basket after at most this long, then rests there.
inline constexpr double kShotFlightS = 1.0;

struct CourtInfo {
  std::string template_name;
  double length_m = 0.0;
  double width_m = 0.0;
  bool operator==(const CourtInfo&) const = default;
};

struct RosterEntry {
  TrackId track_id = 0;
  ingest::Team team = ingest::Team::A;
  embodiment::ClassificationProfile profile;
  bool operator==(const RosterEntry&) const = default;
};

struct ScenePlayerFrame {
  TrackId track_id = 0;
  geometry::CourtPoint position;
  double theta_base = 0.0;
  double theta_trunk = 0.0;
  double theta_head = 0.0;
  std::string action;
  bool has_ball = false;
  bool out_of_bounds = false;
  bool operator==(const ScenePlayerFrame&) const = default;
};

struct BallState {
  geometry::CourtPoint position;
  double height_m = 0.0;
  bool operator==(const BallState&) const = default;
};

struct SceneFrame {
  std::int64_t index = 0;
  double timestamp_s = 0.0;
  std::optional<BallState> ball;
  std::vector<ScenePlayerFrame> players;
  bool operator==(const SceneFrame&) const = default;
};

struct TransitSample {
  std::int64_t frame = 0;
  geometry::CourtPoint position;
  double height_m = 0.0;
  bool operator==(const TransitSample&) const = default;
};

struct SceneEvent {
  possession::GameEvent event;
  std::vector<TransitSample> samples;
  bool operator==(const SceneEvent&) const = default;
};

/// Frames are dense over [0, frames.size()); events use those indices.
struct SceneDocument {
  std::string schema_version = kSchemaVersion;
  CourtInfo court;
  double fps = 30.0;
  std::vector<RosterEntry> roster;
  std::vector<SceneFrame> frames;
  std::vector<SceneEvent> events;

  const RosterEntry* find_player(TrackId id) const noexcept;
  bool operator==(const SceneDocument&) const = default;
};

struct RosterConfig {
  /// Fallback classification per track when detections carry none.
  std::map<TrackId, double> points;
  embodiment::ProfileTable profiles;
  /// Speed above which a player without another label is pushing.
  double push_speed_mps = 0.3;
};

struct SceneInputs {
  const ingest::Sequence* sequence = nullptr;
  const geometry::CourtTemplate* court = nullptr;
  /// One homography for the clip, or one per frame.
  std::span<const geometry::Homography> homographies;
  const std::map<TrackId, smoothing::SmoothedTrack>* tracks = nullptr;
  const std::map<TrackId, std::vector<embodiment::OrientationTriple>>* orientations = nullptr;
  std::span<const possession::PossessionInterval> intervals;
  std::span<const possession::GameEvent> events;
  const RosterConfig* roster = nullptr;
  /// Receives notes such as unknown upstream action labels.
  std::vector<std::string>* warnings = nullptr;
};

/// Resolves each track's classification profile from detections or the
/// roster fallback. Throws InconsistentInputs when neither supplies points.
std::map<TrackId, embodiment::ClassificationProfile> resolve_profiles(
    const ingest::Sequence& seq, const RosterConfig& roster);

/// Assembles the document. All numbers are quantized to 1e-6 so the result
/// survives a serialize/parse round trip unchanged.
SceneDocument build_scene(const SceneInputs& in);

enum class LintKind { TeamPointCap, TeamSize, OutOfBounds, Teleport, MultipleHolders };

struct LintWarning {
  LintKind kind;
  std::string message;
  std::optional<std::int64_t> frame;
  std::optional<ingest::Team> team;
};

std::string to_string(LintKind kind);

struct LintOptions {
  double team_point_cap = 14.0;
  std::size_t team_size = 5;
  double margin_m = kCourtMarginM;
  /// Per-frame jump limit at 30 fps; scaled by 30 / fps for other rates.
  double teleport_m_at_30fps = 2.0;
};

std::vector<LintWarning> lint_scene(const SceneDocument& doc, const LintOptions& opts = {});

void serialize_scene(const SceneDocument& doc, std::ostream& out);
std::string serialize_scene(const SceneDocument& doc);
/// Throws MalformedScene with the byte offset or JSON path of the problem.
SceneDocument parse_scene(std::string_view bytes);
SceneDocument parse_scene_file(const std::string& path);
void write_scene_file(const SceneDocument& doc, const std::string& path);

/// Rounds to 6 decimal places, normalizing -0 to 0.
double quantize(double v) noexcept;
/// quantize() for angles, kept inside (-180, 180].
double quantize_angle(double deg) noexcept;

/// Height hint along a transit, s in [0, 1].
double transit_height(double s, double apex_m) noexcept;

}  // namespace bridge::scene
