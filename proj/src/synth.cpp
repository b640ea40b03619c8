#include "bridge/synth.hpp"

#include "bridge/angles.hpp"
#include "bridge/embodiment.hpp"
#include "bridge/error.hpp"
#include "bridge/smoothing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>

namespace bridge::synth {

using json = nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidScript, msg); }

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number()) {
    invalid(where + ": '" + key + "' must be a number");
  }
  return obj[key].get<double>();
}

double get_number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get_number(obj, key, where);
}

std::int64_t frame_of(double t, double fps) { return std::llround(t * fps); }

// Cubic Hermite through the waypoints with finite-difference tangents and
// zero tangents at both ends; held constant outside the waypoint range.
class Path {
 public:
  explicit Path(const std::vector<Waypoint>& wps) : wps_(wps) {
    const std::size_t n = wps_.size();
    tangents_.assign(n, {0.0, 0.0});
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double dt = wps_[k + 1].t - wps_[k - 1].t;
      tangents_[k] = {(wps_[k + 1].position.x - wps_[k - 1].position.x) / dt,
                      (wps_[k + 1].position.y - wps_[k - 1].position.y) / dt};
    }
  }

  geometry::CourtPoint position(double t) const {
    const auto [k, s] = locate(t);
    if (k + 1 >= wps_.size()) return wps_.back().position;
    const double h = wps_[k + 1].t - wps_[k].t;
    const double h00 = 2 * s * s * s - 3 * s * s + 1;
    const double h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s;
    const double h11 = s * s * s - s * s;
    const auto& a = wps_[k].position;
    const auto& b = wps_[k + 1].position;
    return {h00 * a.x + h10 * h * tangents_[k].x + h01 * b.x + h11 * h * tangents_[k + 1].x,
            h00 * a.y + h10 * h * tangents_[k].y + h01 * b.y + h11 * h * tangents_[k + 1].y};
  }

  std::pair<double, double> offsets(double t) const {
    const auto [k, s] = locate(t);
    if (k + 1 >= wps_.size()) return {wps_.back().trunk_offset_deg, wps_.back().head_offset_deg};
    const auto& a = wps_[k];
    const auto& b = wps_[k + 1];
    return {a.trunk_offset_deg + s * (b.trunk_offset_deg - a.trunk_offset_deg),
            a.head_offset_deg + s * (b.head_offset_deg - a.head_offset_deg)};
  }

 private:
  // Segment index and local parameter in [0, 1].
  std::pair<std::size_t, double> locate(double t) const {
    if (t <= wps_.front().t) return {0, 0.0};
    if (t >= wps_.back().t) return {wps_.size() - 1, 0.0};
    std::size_t k = 0;
    while (wps_[k + 1].t < t) ++k;
    return {k, (t - wps_[k].t) / (wps_[k + 1].t - wps_[k].t)};
  }

  std::vector<Waypoint> wps_;
  std::vector<geometry::CourtPoint> tangents_;
};

struct HoldFrames {
  TrackId holder;
  std::int64_t start;
  std::int64_t end;
};

std::vector<HoldFrames> hold_frames(const PlayScript& s) {
  std::vector<HoldFrames> out;
  const auto last = static_cast<std::int64_t>(s.frame_count()) - 1;
  for (const auto& h : s.ball_schedule) {
    out.push_back({h.holder, std::min(frame_of(h.start_s, s.fps), last),
                   std::min(frame_of(h.end_s, s.fps), last)});
  }
  return out;
}

std::size_t shot_flight_frames(double fps) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(scene::kShotFlightS * fps)));
}

double image_span(const geometry::Homography& to_image, geometry::CourtPoint a,
                  geometry::CourtPoint b) {
  const Eigen::Vector2d ia = to_image.transfer({a.x, a.y});
  const Eigen::Vector2d ib = to_image.transfer({b.x, b.y});
  return (ia - ib).norm();
}

}  // namespace

std::size_t PlayScript::frame_count() const noexcept {
  return static_cast<std::size_t>(std::max<std::int64_t>(0, std::llround(duration_s * fps)));
}

void PlayScript::validate() const {
  if (!(duration_s > 0.0) || !(fps > 0.0)) invalid("duration_s and fps must be positive");
  if (frame_count() < 2) invalid("script must span at least two frames");
  const geometry::CourtTemplate court = [&] {
    try {
      return geometry::find_template(court_template);
    } catch (const Error& e) {
      invalid(e.what());
    }
  }();

  std::set<TrackId> ids;
  std::map<ingest::Team, std::pair<std::size_t, double>> teams;
  for (const auto& p : players) {
    const std::string who = "player " + std::to_string(p.track_id);
    if (!ids.insert(p.track_id).second) invalid(who + " is listed twice");
    if (!ingest::valid_classification_points(p.points)) invalid(who + " has invalid points");
    auto& [count, sum] = teams[p.team];
    ++count;
    sum += p.points;
    if (p.waypoints.empty()) invalid(who + " has no waypoints");
    for (std::size_t k = 0; k < p.waypoints.size(); ++k) {
      const auto& w = p.waypoints[k];
      if (!court.contains(w.position)) invalid(who + " waypoint " + std::to_string(k) + " is off court");
      if (k > 0 && !(w.t > p.waypoints[k - 1].t)) invalid(who + " waypoint times must increase");
    }
  }
  for (const auto& [team, info] : teams) {
    if (info.first > 5) invalid("team " + ingest::to_string(team) + " has more than 5 players");
    if (info.second > 14.0 + 1e-9) {
      invalid("team " + ingest::to_string(team) + " classification points exceed 14");
    }
  }

  for (std::size_t k = 0; k < ball_schedule.size(); ++k) {
    const auto& h = ball_schedule[k];
    const auto it = std::find_if(players.begin(), players.end(),
                                 [&](const ScriptPlayer& p) { return p.track_id == h.holder; });
    if (it == players.end()) invalid("ball holder " + std::to_string(h.holder) + " is not a player");
    if (it->team != offense_team) invalid("ball holder " + std::to_string(h.holder) + " is not on offense");
    if (h.start_s < 0.0 || h.end_s < h.start_s || h.end_s > duration_s) {
      invalid("ball hold " + std::to_string(k) + " has invalid times");
    }
    if (k > 0 && frame_of(h.start_s, fps) <= frame_of(ball_schedule[k - 1].end_s, fps)) {
      invalid("ball holds must be disjoint and chronological");
    }
  }
  if (terminal_shot && ball_schedule.empty()) invalid("terminal_shot needs a ball holder");
  if (!(noise.pixel_sigma >= 0.0)) invalid("noise.pixel_sigma must be >= 0");
  if (!(noise.dropout_prob >= 0.0 && noise.dropout_prob < 1.0)) {
    invalid("noise.dropout_prob must be in [0, 1)");
  }
}

PlayScript parse_script(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(std::string("script is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("script must be a JSON object");

  PlayScript s;
  s.name = j.value("name", std::string("unnamed"));
  s.duration_s = get_number(j, "duration_s", "script");
  s.fps = get_number_or(j, "fps", 30.0, "script");
  try {
    s.offense_team = ingest::team_from_string(j.value("offense_team", std::string("A")));
  } catch (const Error& e) {
    invalid(e.what());
  }
  s.court_template = j.value("court_template", std::string("NBA"));

  if (j.contains("noise")) {
    const json& n = j["noise"];
    s.noise.pixel_sigma = get_number_or(n, "pixel_sigma", 0.0, "noise");
    s.noise.dropout_prob = get_number_or(n, "dropout_prob", 0.0, "noise");
    if (n.contains("seed")) {
      if (!n["seed"].is_number_unsigned()) invalid("noise.seed must be a non-negative integer");
      s.noise.seed = n["seed"].get<std::uint64_t>();
    }
  }

  if (!j.contains("camera") || !j["camera"].is_object()) invalid("script needs a camera object");
  const json& cam = j["camera"];
  try {
    if (cam.contains("homography")) {
      const auto values = cam["homography"].get<std::vector<double>>();
      if (values.size() != 9) invalid("camera.homography needs 9 numbers");
      s.camera = geometry::Homography::from_row_major(std::span<const double, 9>(values.data(), 9));
    } else if (cam.contains("landmarks")) {
      const auto court = geometry::find_template(s.court_template);
      std::vector<geometry::Correspondence> corr;
      for (const auto& [name, uv] : cam["landmarks"].items()) {
        const auto v = uv.get<std::vector<double>>();
        if (v.size() != 2) invalid("camera landmark '" + name + "' needs [u, v]");
        corr.push_back({{v[0], v[1]}, court.landmark(name), name});
      }
      s.camera = geometry::estimate_homography(corr);
    } else {
      invalid("camera needs 'homography' or 'landmarks'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidScript) throw;
    invalid(std::string("camera: ") + e.what());
  } catch (const json::exception& e) {
    invalid(std::string("camera: ") + e.what());
  }

  if (!j.contains("players") || !j["players"].is_array()) invalid("script needs a players array");
  std::map<ingest::Team, std::vector<std::size_t>> missing_points;
  for (const auto& pj : j["players"]) {
    ScriptPlayer p;
    if (!pj.contains("track_id") || !pj["track_id"].is_number_integer()) {
      invalid("player needs an integer track_id");
    }
    p.track_id = pj["track_id"].get<TrackId>();
    const std::string who = "player " + std::to_string(p.track_id);
    try {
      p.team = ingest::team_from_string(pj.value("team", std::string()));
    } catch (const Error& e) {
      invalid(who + ": " + e.what());
    }
    if (pj.contains("points")) {
      p.points = get_number(pj, "points", who);
    } else {
      missing_points[p.team].push_back(s.players.size());
    }
    if (!pj.contains("waypoints") || !pj["waypoints"].is_array()) invalid(who + " needs waypoints");
    for (const auto& wj : pj["waypoints"]) {
      Waypoint w;
      w.t = get_number(wj, "t", who);
      w.position = {get_number(wj, "x", who), get_number(wj, "y", who)};
      w.trunk_offset_deg = get_number_or(wj, "trunk_offset_deg", 0.0, who);
      w.head_offset_deg = get_number_or(wj, "head_offset_deg", 0.0, who);
      p.waypoints.push_back(w);
    }
    s.players.push_back(std::move(p));
  }

  // 2:1:2 low:mid:high lineup for players without explicit points.
  std::mt19937_64 lineup_rng(s.noise.seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& [team, slots] : missing_points) {
    std::vector<double> lineup(std::begin(kDefaultLineup), std::end(kDefaultLineup));
    std::shuffle(lineup.begin(), lineup.end(), lineup_rng);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      s.players[slots[k]].points = lineup[k % lineup.size()];
    }
  }

  if (j.contains("ball")) {
    const json& b = j["ball"];
    if (b.contains("schedule")) {
      for (const auto& hj : b["schedule"]) {
        if (!hj.contains("holder") || !hj["holder"].is_number_integer()) {
          invalid("ball hold needs an integer holder");
        }
        s.ball_schedule.push_back({hj["holder"].get<TrackId>(), get_number(hj, "start_s", "ball hold"),
                                   get_number(hj, "end_s", "ball hold")});
      }
    }
    s.terminal_shot = b.value("terminal_shot", false);
  }

  s.validate();
  return s;
}

PlayScript load_script_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_script(text);
}

GeneratedPlay generate_play(const PlayScript& script) {
  script.validate();
  const std::size_t n = script.frame_count();
  const double fps = script.fps;
  const geometry::CourtTemplate court = geometry::find_template(script.court_template);
  const geometry::Homography to_image = script.camera.inverse();

  std::vector<ScriptPlayer> players = script.players;
  std::sort(players.begin(), players.end(),
            [](const ScriptPlayer& a, const ScriptPlayer& b) { return a.track_id < b.track_id; });

  // Ground-truth kinematics.
  struct Truth {
    std::vector<geometry::CourtPoint> pos;
    std::vector<embodiment::OrientationTriple> orient;
    std::vector<embodiment::RawOrientation> raw;
    std::vector<double> speed;
    embodiment::ClassificationProfile profile;
  };
  std::map<TrackId, Truth> truth;
  const smoothing::SmoothingConfig heading_cfg;
  for (const auto& p : players) {
    Truth t;
    t.profile = embodiment::profile_for_points(p.points);
    const Path path(p.waypoints);
    smoothing::SmoothedTrack track;
    for (std::size_t f = 0; f < n; ++f) {
      const double time = static_cast<double>(f) / fps;
      t.pos.push_back(path.position(time));
      smoothing::TrackSample s;
      s.frame_index = static_cast<std::int64_t>(f);
      s.position = t.pos.back();
      track.samples.push_back(s);
    }
    track = smoothing::heading_from_track(std::move(track), heading_cfg);
    for (std::size_t f = 0; f < n; ++f) {
      const double time = static_cast<double>(f) / fps;
      const auto [trunk_off, head_off] = path.offsets(time);
      const double base = track.samples[f].theta_base;
      const double trunk_raw = wrap_deg(base + trunk_off);
      const embodiment::RawOrientation raw{trunk_raw, wrap_deg(trunk_raw + head_off)};
      t.raw.push_back(raw);
      t.orient.push_back(embodiment::map_orientation(base, raw, t.profile));
      const std::size_t a = f > 0 ? f - 1 : f;
      const std::size_t b = f + 1 < n ? f + 1 : f;
      const double dt = static_cast<double>(b - a) / fps;
      t.speed.push_back(dt > 0 ? geometry::distance(t.pos[a], t.pos[b]) / dt : 0.0);
    }
    truth.emplace(p.track_id, std::move(t));
  }

  // Ball schedule in frames.
  const auto holds = hold_frames(script);
  std::vector<std::optional<TrackId>> holder(n);
  for (const auto& h : holds)
    for (auto f = h.start; f <= h.end; ++f) holder[static_cast<std::size_t>(f)] = h.holder;

  std::vector<std::optional<scene::BallState>> ball(n);
  std::vector<std::map<TrackId, std::string>> forced(n);
  std::vector<possession::GameEvent> events;
  const std::size_t flight = shot_flight_frames(fps);
  for (std::size_t f = 0; f < n; ++f) {
    if (holder[f]) ball[f] = scene::BallState{truth.at(*holder[f]).pos[f], scene::kHandHeightM};
  }
  for (std::size_t k = 0; k + 1 < holds.size(); ++k) {
    const auto& a = holds[k];
    const auto& b = holds[k + 1];
    const auto span = static_cast<double>(b.start - a.end);
    if (a.holder == b.holder) {
      // Dribble: the ball bounces clear of the holder's box.
      for (auto f = a.end + 1; f < b.start; ++f) {
        const auto& p = truth.at(a.holder).pos[static_cast<std::size_t>(f)];
        ball[static_cast<std::size_t>(f)] = scene::BallState{{p.x, p.y + 1.2}, 0.3};
      }
      continue;
    }
    const auto from = truth.at(a.holder).pos[static_cast<std::size_t>(a.end)];
    const auto to = truth.at(b.holder).pos[static_cast<std::size_t>(b.start)];
    for (auto f = a.end + 1; f < b.start; ++f) {
      const double s = static_cast<double>(f - a.end) / span;
      ball[static_cast<std::size_t>(f)] = scene::BallState{
          {from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)},
          scene::transit_height(s, scene::kPassApexM)};
      if (static_cast<std::size_t>(f - a.end) <= flight) {
        forced[static_cast<std::size_t>(f)][a.holder] = "chest_pass";
      }
    }
  }
  if (!holds.empty()) {
    const auto& last = holds.back();
    const auto from = truth.at(last.holder).pos[static_cast<std::size_t>(last.end)];
    for (auto f = static_cast<std::size_t>(last.end) + 1; f < n; ++f) {
      if (script.terminal_shot) {
        const auto to = court.nearest_basket(from);
        const double s = std::min(
            1.0, static_cast<double>(f - static_cast<std::size_t>(last.end)) / static_cast<double>(flight));
        ball[f] = scene::BallState{{from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)},
                                   scene::transit_height(s, scene::kShotApexM)};
        if (f - static_cast<std::size_t>(last.end) <= flight) forced[f][last.holder] = "shot";
      } else {
        holder[f] = last.holder;
        ball[f] = scene::BallState{truth.at(last.holder).pos[f], scene::kHandHeightM};
      }
    }
  }

  // Ground-truth possession and events, straight from the schedule.
  GeneratedPlay out;
  for (std::size_t k = 0; k < holds.size(); ++k) {
    auto end = holds[k].end;
    if (k + 1 == holds.size() && !script.terminal_shot) end = static_cast<std::int64_t>(n) - 1;
    out.holds.push_back({holds[k].holder, holds[k].start, end});
  }
  for (std::size_t k = 0; k < out.holds.size();) {
    std::size_t g = k;
    while (g + 1 < out.holds.size() && out.holds[g + 1].track_id == out.holds[k].track_id) ++g;
    if (g > k) {
      events.push_back({possession::EventKind::Dribble, out.holds[k].track_id, std::nullopt,
                        out.holds[k].start_frame, out.holds[g].end_frame});
    }
    if (g + 1 < out.holds.size()) {
      const auto& a = out.holds[g];
      const auto& b = out.holds[g + 1];
      possession::GameEvent pass{possession::EventKind::Pass, a.track_id, b.track_id, a.end_frame,
                                 a.end_frame};
      if (b.start_frame > a.end_frame + 1) {
        pass.transit_start_frame = a.end_frame + 1;
        pass.transit_end_frame = b.start_frame - 1;
      }
      events.push_back(pass);
    }
    k = g + 1;
  }
  if (script.terminal_shot && out.holds.back().end_frame + 1 < static_cast<std::int64_t>(n)) {
    events.push_back({possession::EventKind::Shot, out.holds.back().track_id, std::nullopt,
                      out.holds.back().end_frame + 1, static_cast<std::int64_t>(n) - 1});
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return a.transit_start_frame < b.transit_start_frame;
  });

  // Truth document.
  scene::SceneDocument& doc = out.truth;
  doc.court = {court.name, court.length_m, court.width_m};
  doc.fps = fps;
  for (const auto& p : players) {
    doc.roster.push_back({p.track_id, p.team, truth.at(p.track_id).profile});
  }
  doc.frames.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    auto& frame = doc.frames[f];
    frame.index = static_cast<std::int64_t>(f);
    frame.timestamp_s = scene::quantize(static_cast<double>(f) / fps);
    if (ball[f]) {
      frame.ball = scene::BallState{{scene::quantize(ball[f]->position.x),
                                     scene::quantize(ball[f]->position.y)},
                                    scene::quantize(ball[f]->height_m)};
    }
    for (const auto& p : players) {
      const auto& t = truth.at(p.track_id);
      scene::ScenePlayerFrame pf;
      pf.track_id = p.track_id;
      pf.position = {scene::quantize(t.pos[f].x), scene::quantize(t.pos[f].y)};
      pf.theta_base = scene::quantize_angle(t.orient[f].theta_base);
      pf.theta_trunk = scene::quantize_angle(t.orient[f].theta_trunk);
      pf.theta_head = scene::quantize_angle(t.orient[f].theta_head);
      pf.has_ball = holder[f] && *holder[f] == p.track_id;
      pf.out_of_bounds = !court.contains(pf.position, scene::kCourtMarginM);
      const auto forced_it = forced[f].find(p.track_id);
      if (forced_it != forced[f].end()) {
        pf.action = forced_it->second;
      } else if (pf.has_ball) {
        pf.action = "dribble";
      } else {
        pf.action = t.speed[f] >= 0.3 ? "push" : "idle";
      }
      frame.players.push_back(std::move(pf));
    }
  }
  for (const auto& e : events) {
    scene::SceneEvent se{e, {}};
    if (e.kind != possession::EventKind::Dribble) {
      for (auto f = e.transit_start_frame; f <= e.transit_end_frame; ++f) {
        const auto& b = doc.frames[static_cast<std::size_t>(f)].ball;
        if (b) se.samples.push_back({f, b->position, b->height_m});
      }
    }
    doc.events.push_back(std::move(se));
  }

  // Noisy detections. Draw counts are fixed per frame and player so a given
  // seed always produces the same stream.
  std::mt19937_64 rng(script.noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double sigma = script.noise.pixel_sigma;
  const double dropout = script.noise.dropout_prob;
  auto jitter = [&](geometry::ImagePoint p) {
    const double du = gauss(rng);
    const double dv = gauss(rng);
    return geometry::ImagePoint{p.u + sigma * du, p.v + sigma * dv};
  };
  auto image_of = [&](const geometry::CourtPoint& c) {
    const Eigen::Vector2d q = to_image.transfer({c.x, c.y});
    return geometry::ImagePoint{q.x(), q.y()};
  };

  ingest::Sequence& seq = out.sequence;
  seq.fps = fps;
  seq.offense_team = script.offense_team;
  seq.court_template = court.name;
  seq.pixel_sigma = sigma;
  seq.metadata["script"] = script.name;
  seq.metadata["seed"] = std::to_string(script.noise.seed);
  for (const auto& [name, point] : court.keypoints) {
    seq.correspondences.push_back({jitter(image_of(point)), point, name});
  }

  for (std::size_t f = 0; f < n; ++f) {
    ingest::FrameRecord rec;
    rec.frame_index = static_cast<std::int64_t>(f);
    rec.timestamp_s = static_cast<double>(f) / fps;
    for (const auto& p : players) {
      const auto& t = truth.at(p.track_id);
      const bool dropped = uniform(rng) < dropout;
      const auto center = jitter(image_of(t.pos[f]));
      if (dropped) continue;
      const double scale = t.profile.seat_scale;
      const auto& c = t.pos[f];
      const double h = image_span(to_image, c, {c.x, c.y + kPlayerHeightM * scale});
      const double w = image_span(to_image, {c.x - kPlayerWidthM * scale / 2.0, c.y},
                                  {c.x + kPlayerWidthM * scale / 2.0, c.y});
      ingest::PlayerDetection d;
      d.track_id = p.track_id;
      d.team = p.team;
      d.bbox = ingest::BoundingBox::from_center(center, w, h);
      d.classification_points = p.points;
      d.trunk_yaw_raw = t.raw[f].theta_trunk_raw;
      d.head_yaw_raw = t.raw[f].theta_head_raw;
      rec.players.push_back(d);
    }
    const bool ball_dropped = uniform(rng) < dropout;
    if (ball[f]) {
      const auto center = jitter(image_of(ball[f]->position));
      const auto& c = ball[f]->position;
      const double size = image_span(to_image, {c.x - kBallDiameterM / 2.0, c.y},
                                     {c.x + kBallDiameterM / 2.0, c.y});
      if (!ball_dropped) rec.ball = ingest::BoundingBox::from_center(center, size, size);
    }
    seq.frames.push_back(std::move(rec));
  }
  return out;
}

}  // namespace bridge::synth
