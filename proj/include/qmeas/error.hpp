#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmeas {

enum class ErrorKind {
  NotSquare,
  NotHermitian,
  NonFinite,
  NotNormalized,
  NotPositive,
  TraceNotOne,
  BadWeights,
  DimMismatch,
  NotCommuting,
  NonRealExpectation,
  TooSmall,
  NotOrthonormal,
  DegenerateSpectrum,
  NotInAlgebra,
  BadAmplitudes,
  ParseError,
  ValidationError,
  UnknownFormat,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NonRealExpectation: return "NonRealExpectation";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::BadAmplitudes: return "BadAmplitudes";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownFormat: return "UnknownFormat";
  }
  return "Unknown";
}

}  // namespace qmeas
