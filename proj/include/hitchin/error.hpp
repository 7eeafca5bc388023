#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hitchin {

enum class ErrorCode {
  DegenerateIncidence,
  DegenerateFrame,
  DegenerateApex,
  DegenerateTriple,
  DegenerateGap,
  NotLoxodromic,
  BadDirection,
  NotReduced,
  NotSorted,
  UnboundedInChart,
  OrientationFail,
  InsufficientSamples,
  EmptyInput,
  NoOverlap,
  InvalidInput,
  ResourceLimit,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateIncidence: return "DegenerateIncidence";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::DegenerateApex: return "DegenerateApex";
    case ErrorCode::DegenerateTriple: return "DegenerateTriple";
    case ErrorCode::DegenerateGap: return "DegenerateGap";
    case ErrorCode::NotLoxodromic: return "NotLoxodromic";
    case ErrorCode::BadDirection: return "BadDirection";
    case ErrorCode::NotReduced: return "NotReduced";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::UnboundedInChart: return "UnboundedInChart";
    case ErrorCode::OrientationFail: return "OrientationFail";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

/// Domain error raised by every module. The code identifies the failure class;
/// the message carries the numeric context.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw GeometryError(code, what);
}

}  // namespace hitchin
