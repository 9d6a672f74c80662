#include "hdrbench/error.hpp"

namespace hdrbench {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::TruncatedFrame: return "TruncatedFrame";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FrameCountMismatch: return "FrameCountMismatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NonMonotonicFrameIndex: return "NonMonotonicFrameIndex";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateAbscissa: return "DegenerateAbscissa";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::UnknownCodec: return "UnknownCodec";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::EncoderNotFound: return "EncoderNotFound";
    case ErrorCode::NonZeroExit: return "NonZeroExit";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::DecoderFailure: return "DecoderFailure";
    case ErrorCode::ProbeFailure: return "ProbeFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::MissingCurve: return "MissingCurve";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hdrbench
