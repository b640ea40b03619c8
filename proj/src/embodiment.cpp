#include "bridge/embodiment.hpp"

#include "bridge/error.hpp"
#include "bridge/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bridge::embodiment {

namespace {

struct CategoryDefaults {
  double trunk;
  double head;
  double seat_scale;
};

constexpr CategoryDefaults kLow{10.0, 45.0, 0.85};
constexpr CategoryDefaults kMid{25.0, 60.0, 0.95};
constexpr CategoryDefaults kHigh{45.0, 80.0, 1.0};

double clip(double v, double limit) { return std::clamp(v, -limit, limit); }

}  // namespace

std::string to_string(Category c) {
  switch (c) {
    case Category::Low: return "low";
    case Category::Mid: return "mid";
    case Category::High: return "high";
  }
  return "low";
}

Category category_from_string(const std::string& s) {
  if (s == "low") return Category::Low;
  if (s == "mid") return Category::Mid;
  if (s == "high") return Category::High;
  throw Error(ErrorCode::MalformedScene, "unknown category '" + s + "'");
}

Category category_for_points(double points) {
  if (!ingest::valid_classification_points(points)) {
    throw Error(ErrorCode::InvalidPoints,
                "classification points must be 1.0..4.5 in 0.5 steps, got " +
                    std::to_string(points));
  }
  if (points <= 2.0) return Category::Low;
  if (points <= 3.0) return Category::Mid;
  return Category::High;
}

void ClassificationProfile::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(delta_max_trunk_deg > 0.0 && delta_max_trunk_deg <= 180.0)) {
    fail("delta_max_trunk_deg must be in (0, 180]");
  }
  if (!(delta_max_head_deg > 0.0 && delta_max_head_deg <= 180.0)) {
    fail("delta_max_head_deg must be in (0, 180]");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta must be >= 0");
  if (!(seat_scale > 0.0 && seat_scale <= 1.5)) fail("seat_scale must be in (0, 1.5]");
  if (category_for_points(points) != category) fail("category does not match points");
}

const ProfileOverrides& ProfileTable::for_category(Category c) const noexcept {
  switch (c) {
    case Category::Low: return low;
    case Category::Mid: return mid;
    case Category::High: return high;
  }
  return low;
}

ClassificationProfile profile_for_points(double points, const ProfileOverrides* overrides) {
  const Category category = category_for_points(points);
  const CategoryDefaults& d =
      category == Category::Low ? kLow : category == Category::Mid ? kMid : kHigh;

  ClassificationProfile p;
  p.points = points;
  p.category = category;
  p.delta_max_trunk_deg = d.trunk;
  p.delta_max_head_deg = d.head;
  p.seat_scale = d.seat_scale;
  if (overrides) {
    p.delta_max_trunk_deg = overrides->delta_max_trunk_deg.value_or(p.delta_max_trunk_deg);
    p.delta_max_head_deg = overrides->delta_max_head_deg.value_or(p.delta_max_head_deg);
    p.alpha = overrides->alpha.value_or(p.alpha);
    p.beta = overrides->beta.value_or(p.beta);
    p.seat_scale = overrides->seat_scale.value_or(p.seat_scale);
    p.validate();
  }
  return p;
}

ClassificationProfile profile_for_points(double points, const ProfileTable& table) {
  return profile_for_points(points, &table.for_category(category_for_points(points)));
}

OrientationTriple map_orientation(double theta_base, const RawOrientation& raw,
                                  const ClassificationProfile& profile) {
  OrientationTriple t;
  t.theta_base = wrap_deg(theta_base);
  const double trunk_offset = clip(profile.alpha * shortest_diff(raw.theta_trunk_raw, t.theta_base),
                                   profile.delta_max_trunk_deg);
  t.theta_trunk = wrap_deg(t.theta_base + trunk_offset);
  const double head_offset = clip(profile.beta * shortest_diff(raw.theta_head_raw, t.theta_trunk),
                                  profile.delta_max_head_deg);
  t.theta_head = wrap_deg(t.theta_trunk + head_offset);
  return t;
}

bool satisfies_profile(const OrientationTriple& t, const ClassificationProfile& profile,
                       double tol_deg) noexcept {
  auto in_range = [](double a) { return a > -180.0 && a <= 180.0; };
  return in_range(t.theta_base) && in_range(t.theta_trunk) && in_range(t.theta_head) &&
         std::abs(shortest_diff(t.theta_trunk, t.theta_base)) <=
             profile.delta_max_trunk_deg + tol_deg &&
         std::abs(shortest_diff(t.theta_head, t.theta_trunk)) <=
             profile.delta_max_head_deg + tol_deg;
}

std::vector<OrientationTriple> map_player_sequence(const smoothing::SmoothedTrack& smoothed,
                                                   std::span<const RawYaws> raws,
                                                   const ClassificationProfile& profile) {
  if (raws.size() != smoothed.samples.size()) {
    throw Error(ErrorCode::FrameMisalignment,
                "got " + std::to_string(raws.size()) + " raw yaw entries for " +
                    std::to_string(smoothed.samples.size()) + " track samples");
  }
  std::vector<OrientationTriple> out;
  out.reserve(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i) {
    const double base = smoothed.samples[i].theta_base;
    const double trunk = raws[i].trunk.value_or(base);
    const double head = raws[i].head.value_or(base);
    out.push_back(map_orientation(base, {trunk, head}, profile));
  }
  return out;
}

AbstractedAction abstract_action(const std::string& source_label) {
  static const std::map<std::string, std::string> table = {
      {"jump_shot", "shot"},       {"hook_shot", "shot"},         {"floater", "shot"},
      {"layup", "shot"},           {"shot", "shot"},              {"chest_pass", "chest_pass"},
      {"bounce_pass", "chest_pass"}, {"one_hand_pass", "chest_pass"},
      {"overhead_pass", "chest_pass"}, {"pass", "chest_pass"},    {"run", "push"},
      {"side_step", "push"},       {"back_step", "push"},         {"cut", "push"},
      {"sprint", "push"},          {"dribble", "dribble"},        {"screen", "screen"},
      {"stand", "idle"},           {"idle", "idle"},
  };
  const auto it = table.find(source_label);
  if (it == table.end()) return {"move", false};
  return {it->second, true};
}

}  // namespace bridge::embodiment
