#pragma once

#include "bridge/ingest.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bridge::possession {

using ingest::TrackId;

struct PossessionParams {
  /// Strict lower bound on ball-box coverage.
  double overlap_threshold = 0.70;
  int confirm_frames = 5;
  int release_frames = 5;

  void validate() const;  // throws InvalidConfig naming the field
};

struct PossessionInterval {
  TrackId track_id = 0;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;  // inclusive
  bool operator==(const PossessionInterval&) const = default;
};

enum class EventKind { Pass, Shot, Dribble };

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

struct GameEvent {
  EventKind kind = EventKind::Pass;
  TrackId actor = 0;
  std::optional<TrackId> receiver;  // Pass only
  std::int64_t transit_start_frame = 0;
  std::int64_t transit_end_frame = 0;
  bool operator==(const GameEvent&) const = default;
};

/// Fraction of the ball box covered by the player box. The denominator is the
/// ball area, not the union. Throws ZeroAreaBall.
double overlap_ratio(const ingest::BoundingBox& ball, const ingest::BoundingBox& player);

/// Hysteresis state machine over the sequence. Only offense players can
/// acquire the ball; an interval starts at the first frame of its qualifying
/// run and ends at the holder's last qualifying frame.
std::vector<PossessionInterval> detect_possession(const ingest::Sequence& seq,
                                                  const PossessionParams& params);

/// Derives pass, dribble and shot events from possession intervals.
/// `params` supplies the threshold used to spot within-interval departures
/// and the confirmation window that bounds a dribble.
std::vector<GameEvent> classify_events(const std::vector<PossessionInterval>& intervals,
                                       const ingest::Sequence& seq,
                                       const PossessionParams& params = {});

}  // namespace bridge::possession
