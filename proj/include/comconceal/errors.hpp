#pragma once

#include <stdexcept>
#include <string>

namespace comconceal {

enum class Errc {
  SelfLoop,
  DuplicateEdge,
  NodeOutOfRange,
  ParseError,
  DimensionMismatch,
  EmptySupport,
  InfeasibleParams,
  RewireBudgetExceeded,
  TargetOutOfRange,
  TargetNotACommunity,
  TargetMissing,
  EmptyCommunity,
  EmptyGraph,
  EmptyTarget,
  EmptySelection,
  EmptyInput,
  SizeMismatch,
  SingleCommunity,
  DivergenceDetected,
  ZeroBaseline,
  UnpairedRows,
  TooFewPoints,
  DegenerateGroups,
  ConfigError,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::NodeOutOfRange: return "NodeOutOfRange";
    case Errc::ParseError: return "ParseError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::InfeasibleParams: return "InfeasibleParams";
    case Errc::RewireBudgetExceeded: return "RewireBudgetExceeded";
    case Errc::TargetOutOfRange: return "TargetOutOfRange";
    case Errc::TargetNotACommunity: return "TargetNotACommunity";
    case Errc::TargetMissing: return "TargetMissing";
    case Errc::EmptyCommunity: return "EmptyCommunity";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::EmptyTarget: return "EmptyTarget";
    case Errc::EmptySelection: return "EmptySelection";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::SingleCommunity: return "SingleCommunity";
    case Errc::DivergenceDetected: return "DivergenceDetected";
    case Errc::ZeroBaseline: return "ZeroBaseline";
    case Errc::UnpairedRows: return "UnpairedRows";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::DegenerateGroups: return "DegenerateGroups";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace comconceal
