#include "bridge/ingest.hpp"

#include "bridge/angles.hpp"
#include "bridge/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bridge::ingest {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "bridge-trk";
constexpr int kVersion = 1;

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
  throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line) + ": " + reason);
}

class LineReader {
 public:
  LineReader(std::size_t line, std::vector<std::string>* warnings)
      : line_(line), warnings_(warnings) {}

  void check_keys(const json& obj, std::initializer_list<const char*> known,
                  const std::string& where) const {
    for (const auto& [key, _] : obj.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok && warnings_) {
        warnings_->push_back("line " + std::to_string(line_) + ": ignoring unknown key '" +
                             key + "' in " + where);
      }
    }
  }

  double number(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) malformed(line_, std::string("missing '") + key + "'");
    if (!it->is_number()) malformed(line_, std::string("'") + key + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) malformed(line_, std::string("'") + key + "' must be finite");
    return v;
  }

  std::optional<double> optional_number(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return number(obj, key);
  }

  std::int64_t integer(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) malformed(line_, std::string("missing '") + key + "'");
    if (!it->is_number_integer()) {
      malformed(line_, std::string("'") + key + "' must be an integer");
    }
    return it->get<std::int64_t>();
  }

  std::string string(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) malformed(line_, std::string("missing '") + key + "'");
    if (!it->is_string()) malformed(line_, std::string("'") + key + "' must be a string");
    return it->get<std::string>();
  }

  const json& object(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_object()) {
      malformed(line_, std::string("'") + key + "' must be an object");
    }
    return *it;
  }

  BoundingBox bbox(const json& obj, const std::string& where) const {
    if (!obj.is_object()) malformed(line_, where + " must be an object");
    check_keys(obj, {"x", "y", "w", "h"}, where);
    BoundingBox b{number(obj, "x"), number(obj, "y"), number(obj, "w"), number(obj, "h")};
    if (b.w < 0.0 || b.h < 0.0) malformed(line_, where + " has negative size");
    return b;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
  std::vector<std::string>* warnings_;
};

json parse_json_line(const std::string& text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(line, std::string("invalid JSON: ") + e.what());
  }
}

Sequence parse_header(const json& j, const LineReader& r) {
  if (!j.is_object() || !j.contains("format") || j["format"] != kFormat) {
    throw Error(ErrorCode::MissingHeader, "line 1 is not a bridge-trk header");
  }
  r.check_keys(j, {"format", "version", "fps", "offense_team", "court_template",
                   "correspondences", "pixel_sigma", "metadata"},
               "header");
  if (r.integer(j, "version") != kVersion) {
    malformed(r.line(), "unsupported version " + j["version"].dump());
  }
  Sequence seq;
  seq.fps = r.number(j, "fps");
  if (!(seq.fps > 0.0)) malformed(r.line(), "fps must be positive");
  if (!j.contains("offense_team")) malformed(r.line(), "header must declare offense_team");
  try {
    seq.offense_team = team_from_string(r.string(j, "offense_team"));
  } catch (const Error& e) {
    malformed(r.line(), e.what());
  }
  if (j.contains("court_template")) seq.court_template = r.string(j, "court_template");
  seq.pixel_sigma = r.optional_number(j, "pixel_sigma");
  if (seq.pixel_sigma && *seq.pixel_sigma < 0.0) {
    malformed(r.line(), "pixel_sigma must be non-negative");
  }

  if (j.contains("correspondences")) {
    const json& list = j["correspondences"];
    if (!list.is_array()) malformed(r.line(), "'correspondences' must be an array");
    for (const auto& c : list) {
      if (!c.is_object()) malformed(r.line(), "correspondence must be an object");
      r.check_keys(c, {"landmark", "image", "court"}, "correspondence");
      geometry::Correspondence corr;
      const json& img = r.object(c, "image");
      const json& court = r.object(c, "court");
      corr.image = {r.number(img, "u"), r.number(img, "v")};
      corr.court = {r.number(court, "x"), r.number(court, "y")};
      if (c.contains("landmark")) corr.landmark = r.string(c, "landmark");
      seq.correspondences.push_back(std::move(corr));
    }
  }

  if (j.contains("metadata")) {
    const json& meta = j["metadata"];
    if (!meta.is_object()) malformed(r.line(), "'metadata' must be an object");
    for (const auto& [key, value] : meta.items()) {
      if (!value.is_string()) malformed(r.line(), "metadata values must be strings");
      seq.metadata[key] = value.get<std::string>();
    }
  }
  return seq;
}

PlayerDetection parse_player(const json& p, const LineReader& r) {
  if (!p.is_object()) malformed(r.line(), "player must be an object");
  r.check_keys(p, {"track_id", "team", "bbox", "classification_points", "trunk_yaw_raw",
                   "head_yaw_raw", "action", "synthetic"},
               "player");
  PlayerDetection d;
  d.track_id = r.integer(p, "track_id");
  try {
    d.team = team_from_string(r.string(p, "team"));
  } catch (const Error& e) {
    malformed(r.line(), e.what());
  }
  if (!p.contains("bbox")) malformed(r.line(), "player missing 'bbox'");
  d.bbox = r.bbox(p["bbox"], "bbox");
  d.classification_points = r.optional_number(p, "classification_points");
  d.trunk_yaw_raw = r.optional_number(p, "trunk_yaw_raw");
  d.head_yaw_raw = r.optional_number(p, "head_yaw_raw");
  if (p.contains("action") && !p["action"].is_null()) d.action = r.string(p, "action");
  if (p.contains("synthetic")) {
    if (!p["synthetic"].is_boolean()) malformed(r.line(), "'synthetic' must be a boolean");
    d.synthetic = p["synthetic"].get<bool>();
  }
  return d;
}

FrameRecord parse_frame(const json& j, const LineReader& r) {
  if (!j.is_object()) malformed(r.line(), "frame record must be an object");
  r.check_keys(j, {"frame_index", "timestamp_s", "players", "ball", "court_keypoints"},
               "frame");
  FrameRecord f;
  f.frame_index = r.integer(j, "frame_index");
  f.timestamp_s = r.number(j, "timestamp_s");
  if (j.contains("players")) {
    if (!j["players"].is_array()) malformed(r.line(), "'players' must be an array");
    for (const auto& p : j["players"]) f.players.push_back(parse_player(p, r));
  }
  if (j.contains("ball") && !j["ball"].is_null()) f.ball = r.bbox(j["ball"], "ball");
  if (j.contains("court_keypoints") && !j["court_keypoints"].is_null()) {
    const json& list = j["court_keypoints"];
    if (!list.is_array()) malformed(r.line(), "'court_keypoints' must be an array");
    std::vector<KeypointObservation> kps;
    for (const auto& k : list) {
      if (!k.is_object()) malformed(r.line(), "keypoint must be an object");
      r.check_keys(k, {"landmark", "u", "v"}, "keypoint");
      kps.push_back({r.string(k, "landmark"), {r.number(k, "u"), r.number(k, "v")}});
    }
    f.court_keypoints = std::move(kps);
  }
  return f;
}

bool valid_yaw(double y) noexcept { return std::isfinite(y) && y > -180.0 && y <= 180.0; }

// Checks one frame against itself and its predecessor. `line` is used for
// messages; zero means the sequence was built in memory.
void validate_frame(const FrameRecord& f, const FrameRecord* prev,
                    std::map<TrackId, Team>& teams, std::size_t line) {
  const std::string where =
      line ? "line " + std::to_string(line) : "frame " + std::to_string(f.frame_index);
  auto fail = [&](ErrorCode code, const std::string& msg) {
    throw Error(code, where + ": " + msg);
  };
  if (f.frame_index < 0) fail(ErrorCode::MalformedRecord, "frame_index must be >= 0");
  if (!std::isfinite(f.timestamp_s)) fail(ErrorCode::MalformedRecord, "timestamp not finite");
  if (prev) {
    if (f.frame_index <= prev->frame_index) {
      fail(ErrorCode::NonMonotoneFrames, "frame_index " + std::to_string(f.frame_index) +
                                             " does not increase after " +
                                             std::to_string(prev->frame_index));
    }
    if (!(f.timestamp_s > prev->timestamp_s)) {
      fail(ErrorCode::NonMonotoneFrames, "timestamp_s does not increase");
    }
  }
  auto check_box = [&](const BoundingBox& b, const std::string& what) {
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.w) ||
        !std::isfinite(b.h) || b.w < 0.0 || b.h < 0.0) {
      fail(ErrorCode::MalformedRecord, what + " must be finite with w, h >= 0");
    }
  };
  if (f.ball) check_box(*f.ball, "ball");

  std::set<TrackId> seen;
  for (const auto& p : f.players) {
    const std::string who = "track " + std::to_string(p.track_id);
    if (!seen.insert(p.track_id).second) {
      fail(ErrorCode::DuplicateTrackId, who + " appears twice");
    }
    check_box(p.bbox, who + " bbox");
    if (p.classification_points && !valid_classification_points(*p.classification_points)) {
      fail(ErrorCode::MalformedRecord, who + " has invalid classification_points");
    }
    if (p.trunk_yaw_raw && !valid_yaw(*p.trunk_yaw_raw)) {
      fail(ErrorCode::MalformedRecord, who + " trunk_yaw_raw outside (-180, 180]");
    }
    if (p.head_yaw_raw && !valid_yaw(*p.head_yaw_raw)) {
      fail(ErrorCode::MalformedRecord, who + " head_yaw_raw outside (-180, 180]");
    }
    const auto [it, inserted] = teams.emplace(p.track_id, p.team);
    if (!inserted && it->second != p.team) {
      fail(ErrorCode::MalformedRecord, who + " changes team");
    }
  }
  if (f.court_keypoints) {
    for (const auto& k : *f.court_keypoints) {
      if (!std::isfinite(k.image.u) || !std::isfinite(k.image.v)) {
        fail(ErrorCode::MalformedRecord, "keypoint '" + k.landmark + "' not finite");
      }
    }
  }
}

json box_json(const BoundingBox& b) {
  return json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

}  // namespace

std::string to_string(Team team) { return team == Team::A ? "A" : "B"; }

Team team_from_string(const std::string& s) {
  if (s == "A") return Team::A;
  if (s == "B") return Team::B;
  throw Error(ErrorCode::MalformedRecord, "team must be \"A\" or \"B\", got \"" + s + "\"");
}

bool valid_classification_points(double points) noexcept {
  if (!std::isfinite(points) || points < 1.0 || points > 4.5) return false;
  const double steps = points * 2.0;
  return std::abs(steps - std::round(steps)) < 1e-9;
}

const PlayerDetection* FrameRecord::find(TrackId id) const noexcept {
  for (const auto& p : players)
    if (p.track_id == id) return &p;
  return nullptr;
}

std::optional<std::size_t> Sequence::position_of(std::int64_t frame_index) const {
  auto it = std::lower_bound(
      frames.begin(), frames.end(), frame_index,
      [](const FrameRecord& f, std::int64_t idx) { return f.frame_index < idx; });
  if (it == frames.end() || it->frame_index != frame_index) return std::nullopt;
  return static_cast<std::size_t>(it - frames.begin());
}

void validate_sequence(const Sequence& seq) {
  if (!(seq.fps > 0.0) || !std::isfinite(seq.fps)) {
    throw Error(ErrorCode::MalformedRecord, "fps must be positive");
  }
  std::map<TrackId, Team> teams;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    validate_frame(seq.frames[i], i ? &seq.frames[i - 1] : nullptr, teams, 0);
  }
}

Sequence parse_sequence(std::istream& in, std::vector<std::string>* warnings) {
  std::string text;
  std::size_t line_no = 0;
  std::optional<Sequence> seq;
  std::map<TrackId, Team> teams;

  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) {
      if (!seq) throw Error(ErrorCode::MissingHeader, "line 1 is empty");
      continue;
    }
    const LineReader reader(line_no, warnings);
    if (!seq) {
      json header;
      try {
        header = json::parse(text);
      } catch (const json::parse_error&) {
        throw Error(ErrorCode::MissingHeader, "line 1 is not a JSON header object");
      }
      seq = parse_header(header, reader);
      continue;
    }
    FrameRecord frame = parse_frame(parse_json_line(text, line_no), reader);
    validate_frame(frame, seq->frames.empty() ? nullptr : &seq->frames.back(), teams, line_no);
    seq->frames.push_back(std::move(frame));
  }
  if (!seq) throw Error(ErrorCode::MissingHeader, "input is empty");
  return std::move(*seq);
}

Sequence parse_sequence_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return parse_sequence(in, warnings);
}

void serialize_sequence(const Sequence& seq, std::ostream& out) {
  json header{{"format", kFormat},
              {"version", kVersion},
              {"fps", seq.fps},
              {"offense_team", to_string(seq.offense_team)},
              {"court_template", seq.court_template}};
  if (!seq.correspondences.empty()) {
    json list = json::array();
    for (const auto& c : seq.correspondences) {
      json item;
      if (c.landmark) item["landmark"] = *c.landmark;
      item["image"] = {{"u", c.image.u}, {"v", c.image.v}};
      item["court"] = {{"x", c.court.x}, {"y", c.court.y}};
      list.push_back(std::move(item));
    }
    header["correspondences"] = std::move(list);
  }
  if (seq.pixel_sigma) header["pixel_sigma"] = *seq.pixel_sigma;
  if (!seq.metadata.empty()) {
    json meta = json::object();
    for (const auto& [k, v] : seq.metadata) meta[k] = v;
    header["metadata"] = std::move(meta);
  }
  out << header.dump() << '\n';

  for (const auto& f : seq.frames) {
    json frame{{"frame_index", f.frame_index}, {"timestamp_s", f.timestamp_s}};
    json players = json::array();
    for (const auto& p : f.players) {
      json pj{{"track_id", p.track_id}, {"team", to_string(p.team)}, {"bbox", box_json(p.bbox)}};
      if (p.classification_points) pj["classification_points"] = *p.classification_points;
      if (p.trunk_yaw_raw) pj["trunk_yaw_raw"] = *p.trunk_yaw_raw;
      if (p.head_yaw_raw) pj["head_yaw_raw"] = *p.head_yaw_raw;
      if (p.action) pj["action"] = *p.action;
      if (p.synthetic) pj["synthetic"] = true;
      players.push_back(std::move(pj));
    }
    frame["players"] = std::move(players);
    frame["ball"] = f.ball ? box_json(*f.ball) : json(nullptr);
    if (f.court_keypoints) {
      json kps = json::array();
      for (const auto& k : *f.court_keypoints) {
        kps.push_back({{"landmark", k.landmark}, {"u", k.image.u}, {"v", k.image.v}});
      }
      frame["court_keypoints"] = std::move(kps);
    }
    out << frame.dump() << '\n';
  }
}

std::string serialize_sequence(const Sequence& seq) {
  std::ostringstream out;
  serialize_sequence(seq, out);
  return out.str();
}

std::map<TrackId, TrackSummary> track_table(const Sequence& seq) {
  std::map<TrackId, TrackSummary> table;
  // Last sequence position each track was seen at.
  std::map<TrackId, std::size_t> last_pos;

  for (std::size_t pos = 0; pos < seq.frames.size(); ++pos) {
    const FrameRecord& f = seq.frames[pos];
    for (const auto& p : f.players) {
      auto [it, inserted] = table.try_emplace(p.track_id);
      TrackSummary& s = it->second;
      if (inserted) {
        s.team = p.team;
        s.first_frame = f.frame_index;
      } else {
        const std::size_t prev = last_pos[p.track_id];
        if (pos > prev + 1) {
          s.gaps.emplace_back(seq.frames[prev + 1].frame_index, seq.frames[pos - 1].frame_index);
        }
      }
      if (!s.classification_points && p.classification_points) {
        s.classification_points = p.classification_points;
      }
      s.last_frame = f.frame_index;
      ++s.present_frames;
      last_pos[p.track_id] = pos;
    }
  }
  return table;
}

Sequence interpolate_gaps(const Sequence& seq, int max_gap_frames) {
  Sequence out = seq;
  if (max_gap_frames <= 0) return out;

  std::map<TrackId, std::size_t> last_pos;
  for (std::size_t pos = 0; pos < seq.frames.size(); ++pos) {
    for (const auto& p : seq.frames[pos].players) {
      const auto found = last_pos.find(p.track_id);
      if (found != last_pos.end()) {
        const std::size_t prev = found->second;
        const std::size_t missing = pos - prev - 1;
        if (missing > 0 && missing <= static_cast<std::size_t>(max_gap_frames)) {
          const PlayerDetection& a = *seq.frames[prev].find(p.track_id);
          const PlayerDetection& b = p;
          const auto fa = static_cast<double>(seq.frames[prev].frame_index);
          const auto fb = static_cast<double>(seq.frames[pos].frame_index);
          const auto ca = a.bbox.center();
          const auto cb = b.bbox.center();
          for (std::size_t k = prev + 1; k < pos; ++k) {
            const double t = (static_cast<double>(seq.frames[k].frame_index) - fa) / (fb - fa);
            PlayerDetection fill = a;
            fill.synthetic = true;
            fill.action.reset();
            const geometry::ImagePoint c{ca.u + t * (cb.u - ca.u), ca.v + t * (cb.v - ca.v)};
            fill.bbox = BoundingBox::from_center(c, a.bbox.w + t * (b.bbox.w - a.bbox.w),
                                                 a.bbox.h + t * (b.bbox.h - a.bbox.h));
            if (a.trunk_yaw_raw && b.trunk_yaw_raw) {
              fill.trunk_yaw_raw = lerp_angle(*a.trunk_yaw_raw, *b.trunk_yaw_raw, t);
            } else {
              fill.trunk_yaw_raw.reset();
            }
            if (a.head_yaw_raw && b.head_yaw_raw) {
              fill.head_yaw_raw = lerp_angle(*a.head_yaw_raw, *b.head_yaw_raw, t);
            } else {
              fill.head_yaw_raw.reset();
            }
            out.frames[k].players.push_back(std::move(fill));
          }
        }
      }
      last_pos[p.track_id] = pos;
    }
  }
  return out;
}

}  // namespace bridge::ingest
