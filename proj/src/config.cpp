#include "bridge/config.hpp"

#include "bridge/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iterator>
#include <set>

namespace bridge {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

// Rejects keys the section does not define, so typos surface immediately.
void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) bad("unknown key '" + where + "." + key + "'");
  }
}

double number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) bad(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

long long integer(const json& obj, const std::string& where, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) bad(where + "." + key + " must be an integer");
  return obj[key].get<long long>();
}

bool boolean(const json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) bad(where + "." + key + " must be true or false");
  return obj[key].get<bool>();
}

std::optional<double> maybe(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, where, key, 0.0);
}

geometry::CourtTemplate parse_template(const json& t, const std::string& where) {
  check_keys(t, where, {"name", "length_m", "width_m", "basket_setback_m", "keypoints"});
  geometry::CourtTemplate c;
  if (!t.contains("name") || !t["name"].is_string()) bad(where + ".name must be a string");
  c.name = t["name"].get<std::string>();
  c.length_m = number(t, where, "length_m", 0.0);
  c.width_m = number(t, where, "width_m", 0.0);
  c.basket_setback_m = number(t, where, "basket_setback_m", c.basket_setback_m);
  if (t.contains("keypoints")) {
    if (!t["keypoints"].is_object()) bad(where + ".keypoints must be an object");
    for (const auto& [name, xy] : t["keypoints"].items()) {
      if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
        bad(where + ".keypoints." + name + " must be [x, y]");
      }
      c.keypoints[name] = {xy[0].get<double>(), xy[1].get<double>()};
    }
  }
  try {
    c.validate();
  } catch (const Error& e) {
    bad(where + ": " + e.what());
  }
  return c;
}

void parse_profiles(const json& profiles, const std::string& where, embodiment::ProfileTable& table) {
  check_keys(profiles, where, {"low", "mid", "high"});
  for (const char* cat : {"low", "mid", "high"}) {
    if (!profiles.contains(cat)) continue;
    const std::string at = where + "." + cat;
    const json& p = profiles[cat];
    check_keys(p, at, {"delta_max_trunk_deg", "delta_max_head_deg", "alpha", "beta", "seat_scale"});
    auto& o = std::string(cat) == "low" ? table.low : std::string(cat) == "mid" ? table.mid : table.high;
    o.delta_max_trunk_deg = maybe(p, at, "delta_max_trunk_deg");
    o.delta_max_head_deg = maybe(p, at, "delta_max_head_deg");
    o.alpha = maybe(p, at, "alpha");
    o.beta = maybe(p, at, "beta");
    o.seat_scale = maybe(p, at, "seat_scale");
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (court_template) {
    try {
      (void)geometry::find_template(*court_template, extra_templates);
    } catch (const Error& e) {
      bad(std::string("geometry.court_template: ") + e.what());
    }
  }
  if (ransac.iterations < 1) bad("calibrate.ransac_iterations must be >= 1");
  if (!(ransac.inlier_threshold_px > 0.0)) bad("calibrate.inlier_threshold_px must be > 0");
  if (max_gap_frames < 0) bad("ingest.max_gap_frames must be >= 0");
  possession.validate();
  smoothing.validate();
  if (!(measurement_floor_m > 0.0)) bad("smoothing.measurement_floor_m must be > 0");
  if (!(roster.push_speed_mps >= 0.0)) bad("embodiment.push_speed_mps must be >= 0");
  for (const auto& [id, points] : roster.points) {
    if (!ingest::valid_classification_points(points)) {
      bad("roster.points." + std::to_string(id) + " must be 1.0..4.5 in 0.5 steps");
    }
  }
  // Building each category's profile runs the override checks.
  for (const double p : {1.0, 2.5, 4.0}) {
    try {
      (void)embodiment::profile_for_points(p, roster.profiles);
    } catch (const Error& e) {
      bad("profiles." + embodiment::to_string(embodiment::category_for_points(p)) + ": " +
          e.what());
    }
  }
}

PipelineConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"geometry", "calibrate", "ingest", "possession", "smoothing", "embodiment", "profiles",
              "roster", "output"});

  PipelineConfig c;
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    check_keys(g, "geometry", {"court_template", "templates"});
    if (g.contains("court_template")) {
      if (!g["court_template"].is_string()) bad("geometry.court_template must be a string");
      c.court_template = g["court_template"].get<std::string>();
    }
    if (g.contains("templates")) {
      if (!g["templates"].is_array()) bad("geometry.templates must be an array");
      for (std::size_t k = 0; k < g["templates"].size(); ++k) {
        c.extra_templates.push_back(
            parse_template(g["templates"][k], "geometry.templates[" + std::to_string(k) + "]"));
      }
    }
  }
  if (j.contains("calibrate")) {
    const json& s = j["calibrate"];
    check_keys(s, "calibrate", {"ransac_iterations", "inlier_threshold_px", "seed"});
    c.ransac.iterations = static_cast<int>(integer(s, "calibrate", "ransac_iterations", c.ransac.iterations));
    c.ransac.inlier_threshold_px = number(s, "calibrate", "inlier_threshold_px", c.ransac.inlier_threshold_px);
    const long long seed = integer(s, "calibrate", "seed", 0);
    if (seed < 0) bad("calibrate.seed must be >= 0");
    c.ransac.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("ingest")) {
    check_keys(j["ingest"], "ingest", {"max_gap_frames"});
    c.max_gap_frames = static_cast<int>(integer(j["ingest"], "ingest", "max_gap_frames", c.max_gap_frames));
  }
  if (j.contains("possession")) {
    const json& s = j["possession"];
    check_keys(s, "possession", {"overlap_threshold", "confirm_frames", "release_frames"});
    c.possession.overlap_threshold = number(s, "possession", "overlap_threshold", c.possession.overlap_threshold);
    c.possession.confirm_frames = static_cast<int>(integer(s, "possession", "confirm_frames", c.possession.confirm_frames));
    c.possession.release_frames = static_cast<int>(integer(s, "possession", "release_frames", c.possession.release_frames));
  }
  if (j.contains("smoothing")) {
    const json& s = j["smoothing"];
    check_keys(s, "smoothing",
               {"process_accel_sigma", "measurement_sigma_m", "standstill_gate_m",
                "heading_smoothing_alpha", "measurement_floor_m", "adaptive_measurement_noise"});
    auto& m = c.smoothing;
    m.process_accel_sigma = number(s, "smoothing", "process_accel_sigma", m.process_accel_sigma);
    m.measurement_sigma_m = number(s, "smoothing", "measurement_sigma_m", m.measurement_sigma_m);
    m.standstill_gate_m = number(s, "smoothing", "standstill_gate_m", m.standstill_gate_m);
    m.heading_smoothing_alpha = number(s, "smoothing", "heading_smoothing_alpha", m.heading_smoothing_alpha);
    c.measurement_floor_m = number(s, "smoothing", "measurement_floor_m", c.measurement_floor_m);
    c.adaptive_measurement_noise =
        boolean(s, "smoothing", "adaptive_measurement_noise", c.adaptive_measurement_noise);
  }
  if (j.contains("embodiment")) {
    const json& s = j["embodiment"];
    check_keys(s, "embodiment", {"profiles", "push_speed_mps"});
    c.roster.push_speed_mps = number(s, "embodiment", "push_speed_mps", c.roster.push_speed_mps);
    if (s.contains("profiles")) parse_profiles(s["profiles"], "embodiment.profiles", c.roster.profiles);
  }
  if (j.contains("profiles")) parse_profiles(j["profiles"], "profiles", c.roster.profiles);
  if (j.contains("roster")) {
    check_keys(j["roster"], "roster", {"points"});
    if (j["roster"].contains("points")) {
      const json& pts = j["roster"]["points"];
      if (!pts.is_object()) bad("roster.points must be an object keyed by track id");
      for (const auto& [key, value] : pts.items()) {
        ingest::TrackId id = 0;
        try {
          std::size_t used = 0;
          id = std::stoll(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          bad("roster.points key '" + key + "' is not a track id");
        }
        if (!value.is_number()) bad("roster.points." + key + " must be a number");
        c.roster.points[id] = value.get<double>();
      }
    }
  }
  if (j.contains("output")) {
    const json& s = j["output"];
    check_keys(s, "output", {"path", "parallel"});
    if (s.contains("path")) {
      if (!s["path"].is_string()) bad("output.path must be a string");
      c.output_path = s["path"].get<std::string>();
    }
    c.parallel = boolean(s, "output", "parallel", c.parallel);
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace bridge
