#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nahomeo {

/// Failure categories shared by every module. The CLI maps them to exit codes.
enum class ErrorKind {
  InvalidArgument,
  BackendMismatch,
  PrecisionExhausted,
  DivisionByZeroAtPrecision,
  UnboundedTail,
  NotInSpace,
  UnsupportedTail,
  DomainError,
  NotDisjoint,
  SeparationTooSmall,
  OutsideCarrier,
  UnresolvedAtLevel,
  ResolutionTooCoarse,
  NoStabilization,
  ContractViolation,
  MetricUndefined,
  DomainEscape,
  MalformedInput,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BackendMismatch: return "BackendMismatch";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::DivisionByZeroAtPrecision: return "DivisionByZeroAtPrecision";
    case ErrorKind::UnboundedTail: return "UnboundedTail";
    case ErrorKind::NotInSpace: return "NotInSpace";
    case ErrorKind::UnsupportedTail: return "UnsupportedTail";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::SeparationTooSmall: return "SeparationTooSmall";
    case ErrorKind::OutsideCarrier: return "OutsideCarrier";
    case ErrorKind::UnresolvedAtLevel: return "UnresolvedAtLevel";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::NoStabilization: return "NoStabilization";
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::MetricUndefined: return "MetricUndefined";
    case ErrorKind::DomainEscape: return "DomainEscape";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace nahomeo
