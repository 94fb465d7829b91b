#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wigdec {

enum class ErrorKind {
  DomainError,
  PoleAtOne,
  DegenerateDelta,
  OutOfSupport,
  CausticPoint,
  SupportEscape,
  Overflow,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so that callers (the CLI,
// the Python bindings) can map it onto exit codes or exception types.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PoleAtOne: return "PoleAtOne";
    case ErrorKind::DegenerateDelta: return "DegenerateDelta";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::CausticPoint: return "CausticPoint";
    case ErrorKind::SupportEscape: return "SupportEscape";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace wigdec
