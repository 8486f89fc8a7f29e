#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace udcoh {

enum class ErrorKind {
  ShapeMismatch,
  CompositionNonzero,
  GcdNotOne,
  BadPrime,
  BadModulus,
  IndexOutOfRange,
  ModulusMismatch,
  LevelMismatch,
  NotAnIdeal,
  SplitMismatch,
  NotACocycle,
  LiftFailed,
  BadIndex,
  ParseError,
  ValidationError,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::CompositionNonzero: return "CompositionNonzero";
    case ErrorKind::GcdNotOne: return "GcdNotOne";
    case ErrorKind::BadPrime: return "BadPrime";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::NotAnIdeal: return "NotAnIdeal";
    case ErrorKind::SplitMismatch: return "SplitMismatch";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::LiftFailed: return "LiftFailed";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the engine carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace udcoh
