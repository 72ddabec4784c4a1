#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crw {

enum class ErrorKind {
  CapExceeded,
  EmptyGenerators,
  InvalidArgument,
  UnsupportedFamily,
  NotGenerating,
  UnsupportedType,
  TooLarge,
  ToleranceUnachievable,
  SingularSystem,
  BracketFailure,
  BudgetExhausted,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::EmptyGenerators: return "EmptyGenerators";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::NotGenerating: return "NotGenerating";
    case ErrorKind::UnsupportedType: return "UnsupportedType";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ToleranceUnachievable: return "ToleranceUnachievable";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

namespace detail {
inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}
}  // namespace detail

}  // namespace crw
