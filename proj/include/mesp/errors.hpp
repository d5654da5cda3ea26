#pragma once

#include <stdexcept>
#include <string>

namespace mesp {

enum class ErrorCode {
  NotPSD,
  ZeroMatrix,
  DegenerateColumn,
  InColumnSpace,
  BadCardinality,
  NoValidIndex,
  RankDeficient,
  RankCollapse,
  IterationLimit,
  KindMismatch,
  TooLarge,
  InsufficientSupport,
  DependentColumns,
  NotLocallyOptimal,
  RankStarved,
  ParseError,
  InfeasibleArgs,
};

inline const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::InColumnSpace: return "InColumnSpace";
    case ErrorCode::BadCardinality: return "BadCardinality";
    case ErrorCode::NoValidIndex: return "NoValidIndex";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InsufficientSupport: return "InsufficientSupport";
    case ErrorCode::DependentColumns: return "DependentColumns";
    case ErrorCode::NotLocallyOptimal: return "NotLocallyOptimal";
    case ErrorCode::RankStarved: return "RankStarved";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InfeasibleArgs: return "InfeasibleArgs";
  }
  return "Unknown";
}

class MespError : public std::runtime_error {
 public:
  MespError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mesp
