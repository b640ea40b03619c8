#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bridge {

enum class ErrorCode {
  // geometry
  TooFewCorrespondences,
  DegenerateConfiguration,
  NoConsensus,
  PointAtInfinity,
  SingularHomography,
  UnknownLandmark,
  UnknownTemplate,
  // ingest
  MalformedRecord,
  NonMonotoneFrames,
  DuplicateTrackId,
  MissingHeader,
  // possession
  ZeroAreaBall,
  IntervalSequenceMismatch,
  // smoothing
  EmptyTrack,
  TooShort,
  // embodiment
  InvalidPoints,
  FrameMisalignment,
  // scene
  InconsistentInputs,
  MalformedScene,
  // synth
  InvalidScript,
  DocumentMismatch,
  // cli / config
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a single machine-readable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bridge
