#pragma once

#include "bridge/config.hpp"
#include "bridge/error.hpp"
#include "bridge/ingest.hpp"
#include "bridge/scene.hpp"

#include <string>
#include <vector>

namespace bridge {

/// A library error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct Reconstruction {
  scene::SceneDocument document;
  std::vector<scene::LintWarning> lint;
  /// Non-fatal notes from ingest and scene assembly.
  std::vector<std::string> notes;
  std::vector<StageTiming> timings;
  geometry::Homography homography;  // clip homography, or the first per-frame one
  std::size_t interpolated_records = 0;
};

/// Runs calibration, projection, possession, smoothing, embodiment, scene
/// assembly and lint on a parsed sequence. Failures surface as StageError.
Reconstruction reconstruct(const ingest::Sequence& seq, const PipelineConfig& cfg);

}  // namespace bridge
