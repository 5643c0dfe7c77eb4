#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlvn {

enum class ErrorKind {
  InvalidSize,
  BoardNotEmpty,
  UnsupportedHandicap,
  GameOver,
  IllegalMove,
  GameNotOver,
  MoveLimitExceeded,
  IoError,
  FormatError,
  InvalidConfig,
  DimMismatch,
  EmptyHistogram,
  OutOfRange,
  GridMismatch,
  EmptyDataset,
  EngineFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mlvn
