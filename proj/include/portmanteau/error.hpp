#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace portmanteau {

enum class ErrorCode {
  DimensionMismatch,
  EmptySet,
  InexactFragment,
  InvalidArgument,
  InvalidMeasure,
  UnboundedRegion,
  UnboundedIntegral,
  MissingTailBound,
  MissingTailLocator,
  SearchExhausted,
  NotFound,
  GridConstruction,
  WindowTooLarge,
  Parse,
  Validation,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InexactFragment: return "InexactFragment";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::UnboundedRegion: return "UnboundedRegion";
    case ErrorCode::UnboundedIntegral: return "UnboundedIntegral";
    case ErrorCode::MissingTailBound: return "MissingTailBound";
    case ErrorCode::MissingTailLocator: return "MissingTailLocator";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::GridConstruction: return "GridConstruction";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Validation: return "Validation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace portmanteau
