#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrbench {

enum class ErrorCode {
  UnknownCorruption,
  InvalidSeverity,
  InvalidImage,
  DecodeError,
  UnsupportedFormat,
  IoError,
  ParseError,
  MissingAccuracy,
  DegenerateCleanAccuracy,
  DegenerateBaseline,
  ZeroVariance,
  LengthMismatch,
  InsufficientSamples,
  InvalidSequences,
  InvalidK,
  InvalidConfig,
  ClusteringFailed,
  NoSccPairs,
  ThresholdNotReached,
  InfeasibleParams,
  NotEnoughDistinctBenchmarks,
  EmptyBenchmark,
  NoValidSubstitution,
  NoScorableBenchmark,
  InconsistentInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every library operation. The code identifies the
/// failure class; the message names the offending item.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corrbench
