#pragma once

#include "bridge/embodiment.hpp"
#include "bridge/geometry.hpp"
#include "bridge/possession.hpp"
#include "bridge/scene.hpp"
#include "bridge/smoothing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bridge {

struct PipelineConfig {
  /// Overrides the template named in the trk header when set.
  std::optional<std::string> court_template;
  std::vector<geometry::CourtTemplate> extra_templates;
  geometry::RansacParams ransac;
  int max_gap_frames = 5;
  possession::PossessionParams possession;
  smoothing::SmoothingConfig smoothing;
  /// Lower bound on the per-point measurement sigma derived from the header
  /// pixel_sigma, in meters.
  double measurement_floor_m = 0.005;
  /// Use the header pixel_sigma (scaled by local meters-per-pixel) as the
  /// measurement noise when present.
  bool adaptive_measurement_noise = true;
  scene::RosterConfig roster;
  std::optional<std::string> output_path;
  bool parallel = false;

  /// Throws InvalidConfig naming the offending key.
  void validate() const;
};

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

}  // namespace bridge
