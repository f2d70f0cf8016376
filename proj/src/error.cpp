#include "corrbench/error.hpp"

namespace corrbench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownCorruption: return "UnknownCorruption";
    case ErrorCode::InvalidSeverity: return "InvalidSeverity";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingAccuracy: return "MissingAccuracy";
    case ErrorCode::DegenerateCleanAccuracy: return "DegenerateCleanAccuracy";
    case ErrorCode::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidSequences: return "InvalidSequences";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ClusteringFailed: return "ClusteringFailed";
    case ErrorCode::NoSccPairs: return "NoSccPairs";
    case ErrorCode::ThresholdNotReached: return "ThresholdNotReached";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::NotEnoughDistinctBenchmarks: return "NotEnoughDistinctBenchmarks";
    case ErrorCode::EmptyBenchmark: return "EmptyBenchmark";
    case ErrorCode::NoValidSubstitution: return "NoValidSubstitution";
    case ErrorCode::NoScorableBenchmark: return "NoScorableBenchmark";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
  }
  return "Unknown";
}

}  // namespace corrbench
