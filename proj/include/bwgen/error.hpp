#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bwgen {

enum class ErrorKind {
  InvalidArgument,
  InvalidState,
  InvalidCatalog,
  InapplicableAction,
  Overflow,
  RankOutOfRange,
  MismatchedEnvironment,
  CountTooLarge,
  // PDDL front-end
  SyntaxError,
  UnsupportedFeature,
  ArityMismatch,
  UndeclaredPredicate,
  UndeclaredObject,
  UndeclaredVariable,
  InvalidSchema,
  // grounded search / classic solver
  PreconditionViolated,
  Unreachable,
  IllFormedGoal,
  // rendering
  CanvasOverflow,
  // archives
  IoError,
  CorruptArchive,
  UnsupportedVersion,
  ShardMismatch,
  MissingShard,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidCatalog: return "InvalidCatalog";
    case ErrorKind::InapplicableAction: return "InapplicableAction";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::RankOutOfRange: return "RankOutOfRange";
    case ErrorKind::MismatchedEnvironment: return "MismatchedEnvironment";
    case ErrorKind::CountTooLarge: return "CountTooLarge";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UndeclaredPredicate: return "UndeclaredPredicate";
    case ErrorKind::UndeclaredObject: return "UndeclaredObject";
    case ErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorKind::InvalidSchema: return "InvalidSchema";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::IllFormedGoal: return "IllFormedGoal";
    case ErrorKind::CanvasOverflow: return "CanvasOverflow";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::CorruptArchive: return "CorruptArchive";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::ShardMismatch: return "ShardMismatch";
    case ErrorKind::MissingShard: return "MissingShard";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// PDDL syntax error with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t col, const std::string& what)
      : Error(ErrorKind::SyntaxError,
              std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

}  // namespace bwgen
