#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdrbench {

enum class ErrorCode {
  // yuv_io
  IoError,
  SizeMismatch,
  TruncatedFrame,
  RangeViolation,
  SpecMismatch,
  // metrics
  DimensionMismatch,
  FrameCountMismatch,
  EmptySequence,
  TooFewSamples,
  NonMonotonicFrameIndex,
  // bdrate
  TooFewPoints,
  DegenerateAbscissa,
  NoOverlap,
  // orchestrator
  UnknownCodec,
  EmptyManifest,
  UnsupportedCombination,
  EncoderNotFound,
  NonZeroExit,
  Timeout,
  DecoderFailure,
  ProbeFailure,
  // manifest / config
  ParseError,
  DuplicateId,
  MissingField,
  MissingFile,
  InvalidValue,
  // report
  InsufficientSamples,
  MissingCurve,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hdrbench
