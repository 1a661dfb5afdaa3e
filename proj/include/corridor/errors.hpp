#pragma once

#include <stdexcept>
#include <string>

namespace corridor {

enum class ErrorCode {
  DuplicateVertex,
  TooFewVertices,
  ParseError,
  UnknownRoute,
  UnknownVehicleClass,
  EmptyWeightSet,
  NonPositiveInputs,
  AmountExceedsCapacity,
  UnsortedStations,
  SiteNotOnRoute,
  NoCandidates,
  TooManyCandidates,
  NonPositiveHorizon,
  NonMonotoneAdoption,
  InvalidConfig,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownRoute: return "UnknownRoute";
    case ErrorCode::UnknownVehicleClass: return "UnknownVehicleClass";
    case ErrorCode::EmptyWeightSet: return "EmptyWeightSet";
    case ErrorCode::NonPositiveInputs: return "NonPositiveInputs";
    case ErrorCode::AmountExceedsCapacity: return "AmountExceedsCapacity";
    case ErrorCode::UnsortedStations: return "UnsortedStations";
    case ErrorCode::SiteNotOnRoute: return "SiteNotOnRoute";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::TooManyCandidates: return "TooManyCandidates";
    case ErrorCode::NonPositiveHorizon: return "NonPositiveHorizon";
    case ErrorCode::NonMonotoneAdoption: return "NonMonotoneAdoption";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corridor
