#include "bridge/error.hpp"
#include "bridge/geometry.hpp"

#include <cmath>

namespace bridge::geometry {

namespace {

struct Markings {
  double lane_width;
  double ft_distance;        // baseline to free-throw line
  double corner_three_y;     // |y| of the straight three-point lines
  double corner_three_len;   // length of the straight segment from the baseline
  double arc_radius;         // three-point arc radius around the basket
  double circle_radius;
};

void add_side(CourtTemplate& t, const Markings& mk, const std::string& side, double sign) {
  const double half_l = t.length_m / 2.0;
  const double base_x = sign * half_l;
  const double inward = -sign;
  auto put = [&](const std::string& name, double x, double y) {
    t.keypoints[name] = CourtPoint{x, y};
  };
  const double ft_x = base_x + inward * mk.ft_distance;
  put("lane_" + side + "_top", base_x, mk.lane_width / 2.0);
  put("lane_" + side + "_bottom", base_x, -mk.lane_width / 2.0);
  put("ft_line_" + side + "_top", ft_x, mk.lane_width / 2.0);
  put("ft_line_" + side + "_bottom", ft_x, -mk.lane_width / 2.0);
  put("ft_line_" + side + "_center", ft_x, 0.0);
  put("three_pt_" + side + "_top_baseline", base_x, mk.corner_three_y);
  put("three_pt_" + side + "_bottom_baseline", base_x, -mk.corner_three_y);
  put("three_pt_" + side + "_top_break", base_x + inward * mk.corner_three_len,
      mk.corner_three_y);
  put("three_pt_" + side + "_bottom_break", base_x + inward * mk.corner_three_len,
      -mk.corner_three_y);
  put("three_pt_" + side + "_apex",
      base_x + inward * (t.basket_setback_m + mk.arc_radius), 0.0);
}

CourtTemplate make_template(std::string name, double length, double width, double setback,
                            const Markings& mk) {
  CourtTemplate t;
  t.name = std::move(name);
  t.length_m = length;
  t.width_m = width;
  t.basket_setback_m = setback;
  const double hl = length / 2.0, hw = width / 2.0;
  t.keypoints["corner_tl"] = {-hl, hw};
  t.keypoints["corner_tr"] = {hl, hw};
  t.keypoints["corner_bl"] = {-hl, -hw};
  t.keypoints["corner_br"] = {hl, -hw};
  t.keypoints["midcourt_top"] = {0.0, hw};
  t.keypoints["midcourt_bottom"] = {0.0, -hw};
  t.keypoints["center_circle"] = {0.0, 0.0};
  t.keypoints["center_circle_top"] = {0.0, mk.circle_radius};
  t.keypoints["center_circle_bottom"] = {0.0, -mk.circle_radius};
  t.keypoints["center_circle_left"] = {-mk.circle_radius, 0.0};
  t.keypoints["center_circle_right"] = {mk.circle_radius, 0.0};
  add_side(t, mk, "left", -1.0);
  add_side(t, mk, "right", 1.0);
  return t;
}

}  // namespace

CourtTemplate nba_court() {
  // Imperial markings: 16 ft lane, 19 ft free-throw line, 22 ft corner three
  // running 14 ft from the baseline, 23.75 ft arc, 6 ft center circle.
  return make_template("NBA", 28.65, 15.24, 1.6002,
                       Markings{4.877, 5.791, 6.706, 4.267, 7.239, 1.829});
}

CourtTemplate fiba_court() {
  return make_template("FIBA", 28.0, 15.0, 1.575,
                       Markings{4.9, 5.8, 6.6, 2.99, 6.75, 1.8});
}

void CourtTemplate::validate() const {
  if (name.empty()) throw Error(ErrorCode::InvalidConfig, "court template needs a name");
  if (!(length_m > 0.0) || !(width_m > 0.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "court template '" + name + "' needs positive length_m and width_m");
  }
  if (!(basket_setback_m >= 0.0) || basket_setback_m > length_m / 2.0) {
    throw Error(ErrorCode::InvalidConfig,
                "court template '" + name + "' has an invalid basket_setback_m");
  }
  for (const auto& [key, p] : keypoints) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !contains(p)) {
      throw Error(ErrorCode::InvalidConfig,
                  "court template '" + name + "': keypoint '" + key + "' is off the court");
    }
  }
}

const CourtPoint& CourtTemplate::landmark(const std::string& key) const {
  const auto it = keypoints.find(key);
  if (it == keypoints.end()) {
    throw Error(ErrorCode::UnknownLandmark,
                "court template '" + name + "' has no landmark '" + key + "'");
  }
  return it->second;
}

bool CourtTemplate::contains(const CourtPoint& p, double margin_m) const noexcept {
  return std::abs(p.x) <= length_m / 2.0 + margin_m + 1e-9 &&
         std::abs(p.y) <= width_m / 2.0 + margin_m + 1e-9;
}

CourtPoint CourtTemplate::nearest_basket(const CourtPoint& p) const noexcept {
  const double bx = length_m / 2.0 - basket_setback_m;
  return {p.x < 0.0 ? -bx : bx, 0.0};
}

CourtTemplate find_template(const std::string& name, std::span<const CourtTemplate> extra) {
  for (const auto& t : extra)
    if (t.name == name) return t;
  if (name == "NBA") return nba_court();
  if (name == "FIBA") return fiba_court();
  throw Error(ErrorCode::UnknownTemplate, "unknown court template '" + name + "'");
}

}  // namespace bridge::geometry
