#include "bridge/possession.hpp"

#include "bridge/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace bridge::possession {

namespace {

struct Candidate {
  TrackId id = 0;
  double ratio = 0.0;
  double center_dist = 0.0;
};

// Orders candidates: larger ratio, then closer center, then lower id.
bool better(const Candidate& a, const Candidate& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.center_dist != b.center_dist) return a.center_dist < b.center_dist;
  return a.id < b.id;
}

bool usable_ball(const ingest::FrameRecord& f) { return f.ball && f.ball->area() > 0.0; }

std::optional<double> holder_ratio(const ingest::FrameRecord& f, TrackId holder) {
  if (!usable_ball(f)) return std::nullopt;
  const auto* p = f.find(holder);
  if (!p) return std::nullopt;
  return overlap_ratio(*f.ball, p->bbox);
}

std::optional<Candidate> best_candidate(const ingest::FrameRecord& f, ingest::Team offense,
                                        double threshold, std::optional<TrackId> exclude) {
  if (!usable_ball(f)) return std::nullopt;
  const auto bc = f.ball->center();
  std::optional<Candidate> best;
  for (const auto& p : f.players) {
    if (p.team != offense || (exclude && p.track_id == *exclude)) continue;
    const double r = overlap_ratio(*f.ball, p.bbox);
    if (!(r > threshold)) continue;
    const Candidate c{p.track_id, r, geometry::distance(bc, p.bbox.center())};
    if (!best || better(c, *best)) best = c;
  }
  return best;
}

// Consecutive frames in which the same non-holder player is the best candidate.
struct Run {
  std::optional<TrackId> id;
  std::int64_t start = 0;
  int length = 0;

  void feed(const std::optional<Candidate>& c, std::int64_t frame) {
    if (!c) {
      *this = Run{};
    } else if (id && *id == c->id) {
      ++length;
    } else {
      id = c->id;
      start = frame;
      length = 1;
    }
  }
};

}  // namespace

void PossessionParams::validate() const {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "possession.overlap_threshold must be in (0, 1]");
  }
  if (confirm_frames < 1) {
    throw Error(ErrorCode::InvalidConfig, "possession.confirm_frames must be >= 1");
  }
  if (release_frames < 1) {
    throw Error(ErrorCode::InvalidConfig, "possession.release_frames must be >= 1");
  }
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Pass: return "pass";
    case EventKind::Shot: return "shot";
    case EventKind::Dribble: return "dribble";
  }
  return "pass";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "pass") return EventKind::Pass;
  if (s == "shot") return EventKind::Shot;
  if (s == "dribble") return EventKind::Dribble;
  throw Error(ErrorCode::MalformedScene, "unknown event kind '" + s + "'");
}

double overlap_ratio(const ingest::BoundingBox& ball, const ingest::BoundingBox& player) {
  const double area = ball.area();
  if (!(area > 0.0)) throw Error(ErrorCode::ZeroAreaBall, "ball box has zero area");
  const double ix = std::max(0.0, std::min(ball.x + ball.w, player.x + player.w) -
                                      std::max(ball.x, player.x));
  const double iy = std::max(0.0, std::min(ball.y + ball.h, player.y + player.h) -
                                      std::max(ball.y, player.y));
  return std::clamp(ix * iy / area, 0.0, 1.0);
}

std::vector<PossessionInterval> detect_possession(const ingest::Sequence& seq,
                                                  const PossessionParams& params) {
  params.validate();
  std::vector<PossessionInterval> out;

  std::optional<TrackId> holder;
  std::int64_t start = 0, last_qualifying = 0;
  int misses = 0;
  Run run;

  auto acquire = [&](std::int64_t frame) {
    holder = run.id;
    start = run.start;
    last_qualifying = frame;
    misses = 0;
    run = Run{};
  };
  auto close = [&] {
    out.push_back({*holder, start, last_qualifying});
    holder.reset();
  };

  for (const auto& f : seq.frames) {
    const std::int64_t t = f.frame_index;
    if (holder) {
      const auto r = holder_ratio(f, *holder);
      if (r && *r > params.overlap_threshold) {
        last_qualifying = t;
        misses = 0;
        run = Run{};
        continue;
      }
      ++misses;
      run.feed(best_candidate(f, seq.offense_team, params.overlap_threshold, holder), t);
      if (run.length >= params.confirm_frames) {
        close();
        acquire(t);
      } else if (misses >= params.release_frames) {
        close();
      }
      continue;
    }
    run.feed(best_candidate(f, seq.offense_team, params.overlap_threshold, std::nullopt), t);
    if (run.length >= params.confirm_frames) acquire(t);
  }
  if (holder) close();
  return out;
}

std::vector<GameEvent> classify_events(const std::vector<PossessionInterval>& intervals,
                                       const ingest::Sequence& seq,
                                       const PossessionParams& params) {
  std::vector<GameEvent> events;
  if (intervals.empty()) return events;
  if (seq.frames.empty()) {
    throw Error(ErrorCode::IntervalSequenceMismatch, "intervals given for an empty sequence");
  }

  std::set<TrackId> known;
  for (const auto& f : seq.frames)
    for (const auto& p : f.players) known.insert(p.track_id);

  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    const bool ordered = i == 0 || intervals[i - 1].end_frame < iv.start_frame;
    if (iv.start_frame > iv.end_frame || !ordered || !seq.position_of(iv.start_frame) ||
        !seq.position_of(iv.end_frame) || !known.count(iv.track_id)) {
      throw Error(ErrorCode::IntervalSequenceMismatch,
                  "interval #" + std::to_string(i) + " (track " + std::to_string(iv.track_id) +
                      ", frames " + std::to_string(iv.start_frame) + "-" +
                      std::to_string(iv.end_frame) + ") does not fit the sequence");
    }
  }

  // Observed departures: ball and holder both detected, coverage at or below
  // threshold. Missing detections are occlusions, not departures.
  auto has_short_departure = [&](const PossessionInterval& iv) {
    const std::size_t first = *seq.position_of(iv.start_frame);
    const std::size_t last = *seq.position_of(iv.end_frame);
    int run = 0;
    bool departed = false;
    for (std::size_t pos = first; pos <= last; ++pos) {
      const auto& f = seq.frames[pos];
      const auto* p = f.find(iv.track_id);
      const bool observed = usable_ball(f) && p;
      if (observed && overlap_ratio(*f.ball, p->bbox) <= params.overlap_threshold) {
        ++run;
        departed = true;
        continue;
      }
      if (observed && departed) {
        if (run < params.confirm_frames) return true;
        run = 0;
        departed = false;
      }
    }
    return false;
  };

  // Maximal runs of consecutive intervals held by the same player.
  std::size_t g = 0;
  while (g < intervals.size()) {
    std::size_t h = g;
    while (h + 1 < intervals.size() && intervals[h + 1].track_id == intervals[g].track_id) ++h;

    bool dribble = h > g;
    for (std::size_t k = g; k <= h && !dribble; ++k) dribble = has_short_departure(intervals[k]);
    if (dribble) {
      events.push_back({EventKind::Dribble, intervals[g].track_id, std::nullopt,
                        intervals[g].start_frame, intervals[h].end_frame});
    }

    if (h + 1 < intervals.size()) {
      const auto& from = intervals[h];
      const auto& to = intervals[h + 1];
      const std::size_t from_end = *seq.position_of(from.end_frame);
      const std::size_t to_start = *seq.position_of(to.start_frame);
      GameEvent pass{EventKind::Pass, from.track_id, to.track_id, from.end_frame,
                     from.end_frame};
      if (to_start > from_end + 1) {
        pass.transit_start_frame = seq.frames[from_end + 1].frame_index;
        pass.transit_end_frame = seq.frames[to_start - 1].frame_index;
      }
      events.push_back(pass);
    }
    g = h + 1;
  }

  const auto& final_iv = intervals.back();
  const std::size_t final_end = *seq.position_of(final_iv.end_frame);
  if (final_end + 1 < seq.frames.size()) {
    events.push_back({EventKind::Shot, final_iv.track_id, std::nullopt,
                      seq.frames[final_end + 1].frame_index, seq.frames.back().frame_index});
  }

  std::stable_sort(events.begin(), events.end(), [](const GameEvent& a, const GameEvent& b) {
    return std::tie(a.transit_start_frame, a.kind, a.actor) <
           std::tie(b.transit_start_frame, b.kind, b.actor);
  });
  return events;
}

}  // namespace bridge::possession
