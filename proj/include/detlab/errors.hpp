#pragma once

#include <stdexcept>
#include <string>

namespace detlab {

enum class ErrorCode {
  InvalidSpec,
  ParseError,
  PoleHit,
  ZeroOnContour,
  WindingInconsistent,
  DegenerateZeros,
  RootFindFailure,
  AliasingSuspected,
  EmptyAnnulus,
  GeometryConflict,
  OutsideDomain,
  TooCloseToContour,
  NoResidueForm,
  TruncationFailure,
  NotConverged,
  InversionCheckFailed,
  NotASimpleZero,
  WindingNonzero,
  WindingNonnegative,
  SizeMismatch,
  NotAvailable,
  TailNotConverged,
  NewtonDiverged,
  OverflowGuard,
  BudgetExceeded,
  SingularGram,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::ZeroOnContour: return "ZeroOnContour";
    case ErrorCode::WindingInconsistent: return "WindingInconsistent";
    case ErrorCode::DegenerateZeros: return "DegenerateZeros";
    case ErrorCode::RootFindFailure: return "RootFindFailure";
    case ErrorCode::AliasingSuspected: return "AliasingSuspected";
    case ErrorCode::EmptyAnnulus: return "EmptyAnnulus";
    case ErrorCode::GeometryConflict: return "GeometryConflict";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::TooCloseToContour: return "TooCloseToContour";
    case ErrorCode::NoResidueForm: return "NoResidueForm";
    case ErrorCode::TruncationFailure: return "TruncationFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InversionCheckFailed: return "InversionCheckFailed";
    case ErrorCode::NotASimpleZero: return "NotASimpleZero";
    case ErrorCode::WindingNonzero: return "WindingNonzero";
    case ErrorCode::WindingNonnegative: return "WindingNonnegative";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotAvailable: return "NotAvailable";
    case ErrorCode::TailNotConverged: return "TailNotConverged";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SingularGram: return "SingularGram";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // input problems map to CLI exit code 2, convergence problems to 3
  bool is_input_error() const noexcept {
    switch (code_) {
      case ErrorCode::InvalidSpec:
      case ErrorCode::ParseError:
      case ErrorCode::PoleHit:
      case ErrorCode::ZeroOnContour:
      case ErrorCode::WindingInconsistent:
      case ErrorCode::DegenerateZeros:
      case ErrorCode::SizeMismatch:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace detlab
