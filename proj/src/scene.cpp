#include "bridge/scene.hpp"

#include "bridge/angles.hpp"
#include "bridge/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace bridge::scene {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void inconsistent(const std::string& msg) {
  throw Error(ErrorCode::InconsistentInputs, msg);
}

std::size_t shot_flight_frames(double fps) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(kShotFlightS * fps)));
}

}  // namespace

double quantize(double v) noexcept {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

double quantize_angle(double deg) noexcept {
  double r = quantize(wrap_deg(deg));
  if (r <= -180.0) r += 360.0;
  return r;
}

double transit_height(double s, double apex_m) noexcept {
  s = std::clamp(s, 0.0, 1.0);
  return kHandHeightM + 4.0 * (apex_m - kHandHeightM) * s * (1.0 - s);
}

const RosterEntry* SceneDocument::find_player(TrackId id) const noexcept {
  for (const auto& r : roster)
    if (r.track_id == id) return &r;
  return nullptr;
}

std::map<TrackId, embodiment::ClassificationProfile> resolve_profiles(
    const ingest::Sequence& seq, const RosterConfig& roster) {
  std::map<TrackId, embodiment::ClassificationProfile> out;
  for (const auto& [id, summary] : ingest::track_table(seq)) {
    std::optional<double> points = summary.classification_points;
    if (!points) {
      const auto it = roster.points.find(id);
      if (it != roster.points.end()) points = it->second;
    }
    if (!points) {
      inconsistent("track " + std::to_string(id) +
                   " has no classification points in detections or roster config");
    }
    try {
      out.emplace(id, embodiment::profile_for_points(*points, roster.profiles));
    } catch (const Error& e) {
      inconsistent("track " + std::to_string(id) + ": " + e.what());
    }
  }
  return out;
}

SceneDocument build_scene(const SceneInputs& in) {
  if (!in.sequence || !in.court || !in.tracks || !in.orientations || !in.roster) {
    inconsistent("build_scene is missing an input");
  }
  const ingest::Sequence& seq = *in.sequence;
  const std::size_t n = seq.frames.size();
  if (in.homographies.size() != 1 && in.homographies.size() != n) {
    inconsistent("expected 1 or " + std::to_string(n) + " homographies, got " +
                 std::to_string(in.homographies.size()));
  }
  auto homography_at = [&](std::size_t pos) -> const geometry::Homography& {
    return in.homographies.size() == 1 ? in.homographies[0] : in.homographies[pos];
  };

  const auto profiles = resolve_profiles(seq, *in.roster);
  const auto table = ingest::track_table(seq);

  SceneDocument doc;
  doc.court = {in.court->name, in.court->length_m, in.court->width_m};
  doc.fps = seq.fps;
  for (const auto& [id, summary] : table) {
    auto profile = profiles.at(id);
    profile.seat_scale = quantize(profile.seat_scale);
    profile.delta_max_trunk_deg = quantize(profile.delta_max_trunk_deg);
    profile.delta_max_head_deg = quantize(profile.delta_max_head_deg);
    profile.alpha = quantize(profile.alpha);
    profile.beta = quantize(profile.beta);
    doc.roster.push_back({id, summary.team, profile});
  }

  // sample index of each track at each frame position, -1 when absent
  std::map<TrackId, std::vector<long>> sample_at;
  for (const auto& [id, summary] : table) {
    const auto track_it = in.tracks->find(id);
    const auto orient_it = in.orientations->find(id);
    if (track_it == in.tracks->end() || orient_it == in.orientations->end()) {
      inconsistent("track " + std::to_string(id) + " has no smoothed track or orientations");
    }
    const auto& samples = track_it->second.samples;
    if (orient_it->second.size() != samples.size()) {
      inconsistent("track " + std::to_string(id) + " orientation count differs from samples");
    }
    auto& slots = sample_at[id];
    slots.assign(n, -1);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto pos = seq.position_of(samples[k].frame_index);
      if (!pos || !seq.frames[*pos].find(id)) {
        inconsistent("track " + std::to_string(id) + " sample at frame " +
                     std::to_string(samples[k].frame_index) + " has no detection");
      }
      slots[*pos] = static_cast<long>(k);
      if (!embodiment::satisfies_profile(orient_it->second[k], profiles.at(id), 1e-9)) {
        inconsistent("track " + std::to_string(id) + " violates its orientation limits at frame " +
                     std::to_string(samples[k].frame_index));
      }
    }
  }

  auto position_of_player = [&](TrackId id, std::size_t pos) -> std::optional<geometry::CourtPoint> {
    const auto it = sample_at.find(id);
    if (it == sample_at.end() || it->second[pos] < 0) return std::nullopt;
    return in.tracks->at(id).samples[static_cast<std::size_t>(it->second[pos])].position;
  };
  // Nearest available position of `id` to frame `pos`, searching outward.
  auto nearest_position = [&](TrackId id, std::size_t pos) -> std::optional<geometry::CourtPoint> {
    for (std::size_t d = 0; d < n; ++d) {
      if (pos >= d)
        if (auto p = position_of_player(id, pos - d)) return p;
      if (pos + d < n)
        if (auto p = position_of_player(id, pos + d)) return p;
    }
    return std::nullopt;
  };

  auto to_pos = [&](std::int64_t frame_index, const char* what) {
    const auto pos = seq.position_of(frame_index);
    if (!pos) {
      inconsistent(std::string(what) + " references frame " + std::to_string(frame_index) +
                   " which is not in the sequence");
    }
    return *pos;
  };

  std::vector<std::optional<TrackId>> holder(n);
  for (const auto& iv : in.intervals) {
    const std::size_t a = to_pos(iv.start_frame, "possession interval");
    const std::size_t b = to_pos(iv.end_frame, "possession interval");
    for (std::size_t p = a; p <= b; ++p) holder[p] = iv.track_id;
  }

  // events re-indexed to frame positions
  std::vector<possession::GameEvent> events;
  for (const auto& e : in.events) {
    possession::GameEvent pe = e;
    pe.transit_start_frame = static_cast<std::int64_t>(to_pos(e.transit_start_frame, "event"));
    pe.transit_end_frame = static_cast<std::int64_t>(to_pos(e.transit_end_frame, "event"));
    events.push_back(pe);
  }

  // Ball path during pass and shot transits.
  std::vector<std::optional<BallState>> ball(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (holder[p]) {
      if (auto pos = position_of_player(*holder[p], p)) ball[p] = BallState{*pos, kHandHeightM};
    }
  }
  for (const auto& e : events) {
    if (e.kind == possession::EventKind::Dribble) continue;
    const auto ts = static_cast<std::size_t>(e.transit_start_frame);
    const auto te = static_cast<std::size_t>(e.transit_end_frame);
    const std::size_t release = ts > 0 ? ts - 1 : 0;
    const auto from = nearest_position(e.actor, release);
    if (!from) continue;
    geometry::CourtPoint to;
    double apex = kPassApexM;
    double span = static_cast<double>(te + 1 - release);
    if (e.kind == possession::EventKind::Pass) {
      const auto rp = nearest_position(*e.receiver, std::min(te + 1, n - 1));
      if (!rp) continue;
      to = *rp;
    } else {
      to = in.court->nearest_basket(*from);
      apex = kShotApexM;
      span = std::min(span, static_cast<double>(shot_flight_frames(seq.fps)));
    }
    for (std::size_t p = ts; p <= te; ++p) {
      if (holder[p]) continue;
      const double s = std::clamp(static_cast<double>(p - release) / span, 0.0, 1.0);
      ball[p] = BallState{{from->x + s * (to.x - from->x), from->y + s * (to.y - from->y)},
                          transit_height(s, apex)};
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (ball[p] || holder[p] || !seq.frames[p].ball) continue;
    try {
      ball[p] = BallState{geometry::project_to_court(homography_at(p), seq.frames[p].ball->center()),
                          kHandHeightM};
    } catch (const Error&) {
      // ball maps to infinity; leave it unplaced
    }
  }

  // Event-driven action labels for actors.
  std::vector<std::map<TrackId, std::string>> forced(n);
  for (const auto& e : events) {
    if (e.kind == possession::EventKind::Dribble) continue;
    const auto ts = static_cast<std::size_t>(e.transit_start_frame);
    const auto te = static_cast<std::size_t>(e.transit_end_frame);
    const std::size_t stop = std::min(te, ts + shot_flight_frames(seq.fps) - 1);
    const std::string label = e.kind == possession::EventKind::Pass ? "chest_pass" : "shot";
    for (std::size_t p = ts; p <= stop; ++p) forced[p][e.actor] = label;
  }

  doc.frames.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    SceneFrame& frame = doc.frames[p];
    frame.index = static_cast<std::int64_t>(p);
    frame.timestamp_s = quantize(seq.frames[p].timestamp_s);
    if (ball[p]) {
      frame.ball = BallState{{quantize(ball[p]->position.x), quantize(ball[p]->position.y)},
                             quantize(ball[p]->height_m)};
    }
    for (const auto& [id, slots] : sample_at) {
      if (slots[p] < 0) continue;
      const auto k = static_cast<std::size_t>(slots[p]);
      const auto& sample = in.tracks->at(id).samples[k];
      const auto& tri = in.orientations->at(id)[k];
      ScenePlayerFrame pf;
      pf.track_id = id;
      pf.position = {quantize(sample.position.x), quantize(sample.position.y)};
      pf.theta_base = quantize_angle(tri.theta_base);
      pf.theta_trunk = quantize_angle(tri.theta_trunk);
      pf.theta_head = quantize_angle(tri.theta_head);
      pf.has_ball = holder[p] && *holder[p] == id;
      pf.out_of_bounds = !in.court->contains(pf.position, kCourtMarginM);

      const auto forced_it = forced[p].find(id);
      const auto* det = seq.frames[p].find(id);
      if (forced_it != forced[p].end()) {
        pf.action = forced_it->second;
      } else if (pf.has_ball) {
        pf.action = "dribble";
      } else if (det && det->action) {
        const auto abstracted = embodiment::abstract_action(*det->action);
        pf.action = abstracted.label;
        if (!abstracted.known && in.warnings) {
          in.warnings->push_back("frame " + std::to_string(p) + ": unknown action '" +
                                 *det->action + "' for track " + std::to_string(id) +
                                 " mapped to 'move'");
        }
      } else {
        const double speed = std::hypot(sample.velocity.vx, sample.velocity.vy);
        pf.action = speed >= in.roster->push_speed_mps ? "push" : "idle";
      }
      frame.players.push_back(std::move(pf));
    }
  }

  for (const auto& e : events) {
    SceneEvent se{e, {}};
    if (e.kind != possession::EventKind::Dribble) {
      for (auto p = e.transit_start_frame; p <= e.transit_end_frame; ++p) {
        const auto& b = doc.frames[static_cast<std::size_t>(p)].ball;
        if (b) se.samples.push_back({p, b->position, b->height_m});
      }
    }
    doc.events.push_back(std::move(se));
  }
  return doc;
}

std::string to_string(LintKind kind) {
  switch (kind) {
    case LintKind::TeamPointCap: return "team_point_cap";
    case LintKind::TeamSize: return "team_size";
    case LintKind::OutOfBounds: return "out_of_bounds";
    case LintKind::Teleport: return "teleport";
    case LintKind::MultipleHolders: return "multiple_holders";
  }
  return "unknown";
}

std::vector<LintWarning> lint_scene(const SceneDocument& doc, const LintOptions& opts) {
  std::vector<LintWarning> out;
  auto fmt = [](double v) {
    std::ostringstream s;
    s.precision(1);
    s << std::fixed << v;
    return s.str();
  };

  for (const ingest::Team team : {ingest::Team::A, ingest::Team::B}) {
    double sum = 0.0;
    std::size_t size = 0;
    for (const auto& r : doc.roster) {
      if (r.team != team) continue;
      sum += r.profile.points;
      ++size;
    }
    const std::string name = ingest::to_string(team);
    if (sum > opts.team_point_cap + 1e-9) {
      out.push_back({LintKind::TeamPointCap,
                     "team " + name + " classification sum " + fmt(sum) + " exceeds cap " +
                         fmt(opts.team_point_cap),
                     std::nullopt, team});
    }
    if (size != opts.team_size) {
      out.push_back({LintKind::TeamSize,
                     "team " + name + " has " + std::to_string(size) + " players, expected " +
                         std::to_string(opts.team_size),
                     std::nullopt, team});
    }
  }

  const double half_l = doc.court.length_m / 2.0 + opts.margin_m;
  const double half_w = doc.court.width_m / 2.0 + opts.margin_m;
  const double jump_limit = opts.teleport_m_at_30fps * 30.0 / doc.fps;

  std::map<TrackId, std::pair<std::int64_t, std::size_t>> outside;  // first frame, count
  std::map<TrackId, std::pair<std::int64_t, geometry::CourtPoint>> last_seen;
  for (const auto& f : doc.frames) {
    std::size_t holders = 0;
    for (const auto& p : f.players) {
      if (p.has_ball) ++holders;
      if (std::abs(p.position.x) > half_l + 1e-9 || std::abs(p.position.y) > half_w + 1e-9) {
        auto [it, inserted] = outside.try_emplace(p.track_id, f.index, 0);
        ++it->second.second;
      }
      const auto prev = last_seen.find(p.track_id);
      if (prev != last_seen.end() && prev->second.first == f.index - 1) {
        const double d = geometry::distance(prev->second.second, p.position);
        if (d > jump_limit) {
          std::ostringstream msg;
          msg << "track " << p.track_id << " jumps " << fmt(d) << " m at frame " << f.index;
          out.push_back({LintKind::Teleport, msg.str(), f.index, std::nullopt});
        }
      }
      last_seen[p.track_id] = {f.index, p.position};
    }
    if (holders > 1) {
      out.push_back({LintKind::MultipleHolders,
                     std::to_string(holders) + " players hold the ball at frame " +
                         std::to_string(f.index),
                     f.index, std::nullopt});
    }
  }
  for (const auto& [id, info] : outside) {
    out.push_back({LintKind::OutOfBounds,
                   "track " + std::to_string(id) + " is outside the court margin in " +
                       std::to_string(info.second) + " frames, first at frame " +
                       std::to_string(info.first),
                   info.first, std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// BRIDGE-SCN v1 serialization

namespace {

json point_fields(json obj, const geometry::CourtPoint& p) {
  obj["x"] = quantize(p.x);
  obj["y"] = quantize(p.y);
  return obj;
}

json to_json(const SceneDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["fps"] = doc.fps;
  j["frame_count"] = doc.frames.size();
  j["court"] = {{"template", doc.court.template_name},
                {"length_m", quantize(doc.court.length_m)},
                {"width_m", quantize(doc.court.width_m)}};

  json roster = json::array();
  for (const auto& r : doc.roster) {
    const auto& p = r.profile;
    roster.push_back({{"track_id", r.track_id},
                      {"team", ingest::to_string(r.team)},
                      {"points", p.points},
                      {"category", embodiment::to_string(p.category)},
                      {"seat_scale", quantize(p.seat_scale)},
                      {"delta_max_trunk_deg", quantize(p.delta_max_trunk_deg)},
                      {"delta_max_head_deg", quantize(p.delta_max_head_deg)},
                      {"alpha", quantize(p.alpha)},
                      {"beta", quantize(p.beta)}});
  }
  j["roster"] = std::move(roster);

  json frames = json::array();
  for (const auto& f : doc.frames) {
    json fj{{"index", f.index}, {"timestamp_s", quantize(f.timestamp_s)}};
    if (f.ball) {
      json b = point_fields(json::object(), f.ball->position);
      b["height_m"] = quantize(f.ball->height_m);
      fj["ball"] = std::move(b);
    } else {
      fj["ball"] = nullptr;
    }
    json players = json::array();
    for (const auto& p : f.players) {
      json pj{{"track_id", p.track_id}};
      pj = point_fields(std::move(pj), p.position);
      pj["theta_base"] = quantize_angle(p.theta_base);
      pj["theta_trunk"] = quantize_angle(p.theta_trunk);
      pj["theta_head"] = quantize_angle(p.theta_head);
      pj["action"] = p.action;
      pj["has_ball"] = p.has_ball;
      pj["out_of_bounds"] = p.out_of_bounds;
      players.push_back(std::move(pj));
    }
    fj["players"] = std::move(players);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);

  json events = json::array();
  for (const auto& se : doc.events) {
    const auto& e = se.event;
    json ej{{"kind", possession::to_string(e.kind)}, {"actor", e.actor}};
    ej["receiver"] = e.receiver ? json(*e.receiver) : json(nullptr);
    ej["transit_start_frame"] = e.transit_start_frame;
    ej["transit_end_frame"] = e.transit_end_frame;
    json samples = json::array();
    for (const auto& s : se.samples) {
      json sj{{"frame", s.frame}};
      sj = point_fields(std::move(sj), s.position);
      sj["height_m"] = quantize(s.height_m);
      samples.push_back(std::move(sj));
    }
    ej["samples"] = std::move(samples);
    events.push_back(std::move(ej));
  }
  j["events"] = std::move(events);
  return j;
}

class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw Error(ErrorCode::MalformedScene, "at " + (path.empty() ? "/" : path) + ": " + msg);
  }

  static const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing '") + key + "'");
    return *it;
  }

  static double number(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_number()) fail(path + "/" + key, "expected a number");
    return v.get<double>();
  }

  static std::int64_t integer(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
    return v.get<std::int64_t>();
  }

  static std::string string(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_string()) fail(path + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  static bool boolean(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_boolean()) fail(path + "/" + key, "expected a boolean");
    return v.get<bool>();
  }

  static const json& array(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_array()) fail(path + "/" + key, "expected an array");
    return v;
  }
};

SceneDocument from_json(const json& j) {
  using R = Reader;
  SceneDocument doc;
  doc.schema_version = R::string(j, "", "schema_version");
  if (doc.schema_version != kSchemaVersion) {
    R::fail("/schema_version", "unsupported schema '" + doc.schema_version + "'");
  }
  doc.fps = R::number(j, "", "fps");
  if (!(doc.fps > 0.0)) R::fail("/fps", "must be positive");
  const auto frame_count = R::integer(j, "", "frame_count");

  const json& court = R::field(j, "", "court");
  doc.court = {R::string(court, "/court", "template"), R::number(court, "/court", "length_m"),
               R::number(court, "/court", "width_m")};

  const json& roster = R::array(j, "", "roster");
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const std::string path = "/roster/" + std::to_string(i);
    const json& r = roster[i];
    RosterEntry e;
    e.track_id = R::integer(r, path, "track_id");
    try {
      e.team = ingest::team_from_string(R::string(r, path, "team"));
      auto& p = e.profile;
      p.points = R::number(r, path, "points");
      p.category = embodiment::category_from_string(R::string(r, path, "category"));
      p.seat_scale = R::number(r, path, "seat_scale");
      p.delta_max_trunk_deg = R::number(r, path, "delta_max_trunk_deg");
      p.delta_max_head_deg = R::number(r, path, "delta_max_head_deg");
      p.alpha = R::number(r, path, "alpha");
      p.beta = R::number(r, path, "beta");
      p.validate();
    } catch (const Error& err) {
      if (err.code() == ErrorCode::MalformedScene) throw;
      R::fail(path, err.what());
    }
    doc.roster.push_back(e);
  }

  const json& frames = R::array(j, "", "frames");
  if (static_cast<std::int64_t>(frames.size()) != frame_count) {
    R::fail("/frames", "frame_count says " + std::to_string(frame_count) + " but " +
                           std::to_string(frames.size()) + " frames are present");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string path = "/frames/" + std::to_string(i);
    const json& fj = frames[i];
    SceneFrame f;
    f.index = R::integer(fj, path, "index");
    if (f.index != static_cast<std::int64_t>(i)) R::fail(path + "/index", "frames must be dense");
    f.timestamp_s = R::number(fj, path, "timestamp_s");
    const json& b = R::field(fj, path, "ball");
    if (!b.is_null()) {
      f.ball = BallState{{R::number(b, path + "/ball", "x"), R::number(b, path + "/ball", "y")},
                         R::number(b, path + "/ball", "height_m")};
    }
    const json& players = R::array(fj, path, "players");
    for (std::size_t k = 0; k < players.size(); ++k) {
      const std::string pp = path + "/players/" + std::to_string(k);
      const json& pj = players[k];
      ScenePlayerFrame p;
      p.track_id = R::integer(pj, pp, "track_id");
      if (!doc.find_player(p.track_id)) R::fail(pp, "track_id not in roster");
      p.position = {R::number(pj, pp, "x"), R::number(pj, pp, "y")};
      p.theta_base = R::number(pj, pp, "theta_base");
      p.theta_trunk = R::number(pj, pp, "theta_trunk");
      p.theta_head = R::number(pj, pp, "theta_head");
      p.action = R::string(pj, pp, "action");
      p.has_ball = R::boolean(pj, pp, "has_ball");
      p.out_of_bounds = R::boolean(pj, pp, "out_of_bounds");
      f.players.push_back(std::move(p));
    }
    doc.frames.push_back(std::move(f));
  }

  const json& events = R::array(j, "", "events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "/events/" + std::to_string(i);
    const json& ej = events[i];
    SceneEvent se;
    auto& e = se.event;
    try {
      e.kind = possession::event_kind_from_string(R::string(ej, path, "kind"));
    } catch (const Error& err) {
      R::fail(path + "/kind", err.what());
    }
    e.actor = R::integer(ej, path, "actor");
    const json& receiver = R::field(ej, path, "receiver");
    if (!receiver.is_null()) e.receiver = R::integer(ej, path, "receiver");
    e.transit_start_frame = R::integer(ej, path, "transit_start_frame");
    e.transit_end_frame = R::integer(ej, path, "transit_end_frame");
    if (e.transit_start_frame < 0 || e.transit_end_frame < e.transit_start_frame ||
        e.transit_end_frame >= frame_count) {
      R::fail(path, "transit frames outside the document");
    }
    const json& samples = R::array(ej, path, "samples");
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const std::string sp = path + "/samples/" + std::to_string(k);
      se.samples.push_back({R::integer(samples[k], sp, "frame"),
                            {R::number(samples[k], sp, "x"), R::number(samples[k], sp, "y")},
                            R::number(samples[k], sp, "height_m")});
    }
    doc.events.push_back(std::move(se));
  }
  return doc;
}

}  // namespace

void serialize_scene(const SceneDocument& doc, std::ostream& out) {
  out << to_json(doc).dump(1) << '\n';
}

std::string serialize_scene(const SceneDocument& doc) {
  std::ostringstream out;
  serialize_scene(doc, out);
  return out.str();
}

SceneDocument parse_scene(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedScene,
                "invalid scene JSON near byte " + std::to_string(e.byte) + " of " +
                    std::to_string(bytes.size()));
  }
  return from_json(j);
}

SceneDocument parse_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scene(bytes);
}

void write_scene_file(const SceneDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  serialize_scene(doc, out);
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace bridge::scene
