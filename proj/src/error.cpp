#include "bridge/error.hpp"

namespace bridge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::TooFewCorrespondences: return "TooFewCorrespondences";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::NoConsensus: return "NoConsensus";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::SingularHomography: return "SingularHomography";
    case ErrorCode::UnknownLandmark: return "UnknownLandmark";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NonMonotoneFrames: return "NonMonotoneFrames";
    case ErrorCode::DuplicateTrackId: return "DuplicateTrackId";
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::ZeroAreaBall: return "ZeroAreaBall";
    case ErrorCode::IntervalSequenceMismatch: return "IntervalSequenceMismatch";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidPoints: return "InvalidPoints";
    case ErrorCode::FrameMisalignment: return "FrameMisalignment";
    case ErrorCode::InconsistentInputs: return "InconsistentInputs";
    case ErrorCode::MalformedScene: return "MalformedScene";
    case ErrorCode::InvalidScript: return "InvalidScript";
    case ErrorCode::DocumentMismatch: return "DocumentMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace bridge
