#pragma once

#include "bridge/angles.hpp"
#include "bridge/smoothing.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bridge::embodiment {

enum class Category { Low, Mid, High };

std::string to_string(Category c);
Category category_from_string(const std::string& s);

/// Low: 1.0-2.0, Mid: 2.5-3.0, High: 3.5-4.5. Throws InvalidPoints.
Category category_for_points(double points);

struct ClassificationProfile {
  double points = 1.0;
  Category category = Category::Low;
  double delta_max_trunk_deg = 10.0;
  double delta_max_head_deg = 45.0;
  double alpha = 1.0;
  double beta = 1.0;
  double seat_scale = 0.85;

  void validate() const;  // throws InvalidConfig
  bool operator==(const ClassificationProfile&) const = default;
};

/// Per-field replacement for a category's defaults.
struct ProfileOverrides {
  std::optional<double> delta_max_trunk_deg;
  std::optional<double> delta_max_head_deg;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> seat_scale;
};

struct ProfileTable {
  ProfileOverrides low;
  ProfileOverrides mid;
  ProfileOverrides high;

  const ProfileOverrides& for_category(Category c) const noexcept;
};

/// Trunk/head limits for a classification score. Low players keep 10 deg of
/// trunk and 45 deg of head rotation, High players 45 and 80. Mid players
/// default to 25 and 60.
ClassificationProfile profile_for_points(double points,
                                         const ProfileOverrides* overrides = nullptr);
ClassificationProfile profile_for_points(double points, const ProfileTable& table);

struct RawOrientation {
  double theta_trunk_raw = 0.0;
  double theta_head_raw = 0.0;
};

struct OrientationTriple {
  double theta_base = 0.0;
  double theta_trunk = 0.0;
  double theta_head = 0.0;
  bool operator==(const OrientationTriple&) const = default;
};

/// Base -> trunk -> head clip chain. Each child follows its raw yaw relative
/// to the parent, scaled by the profile gain and clipped to the profile limit.
OrientationTriple map_orientation(double theta_base, const RawOrientation& raw,
                                  const ClassificationProfile& profile);

/// True when the triple honours the profile limits (with `tol_deg` slack).
bool satisfies_profile(const OrientationTriple& t, const ClassificationProfile& profile,
                       double tol_deg = 1e-9) noexcept;

/// Per-sample raw yaws; either may be missing. A missing yaw defaults to
/// theta_base (neutral facing).
struct RawYaws {
  std::optional<double> trunk;
  std::optional<double> head;
};

/// Frame-wise map_orientation. `raws` must align with `smoothed.samples`
/// (same length), else FrameMisalignment.
std::vector<OrientationTriple> map_player_sequence(const smoothing::SmoothedTrack& smoothed,
                                                   std::span<const RawYaws> raws,
                                                   const ClassificationProfile& profile);

struct AbstractedAction {
  std::string label;
  bool known = true;  // false when the source label fell through to "move"
};

/// Stand-up action vocabulary -> wheelchair action label.
AbstractedAction abstract_action(const std::string& source_label);

}  // namespace bridge::embodiment
