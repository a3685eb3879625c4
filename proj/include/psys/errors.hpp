#pragma once

#include <stdexcept>
#include <string>

namespace psys {

enum class ErrorCode {
  NonPositiveDensity,
  InvalidParameter,
  InadmissibleRatio,
  VacuumReached,
  NoMiddleState,
  ConvergenceFailure,
  DegenerateShock,
  IntegrationFailure,
  NotApproaching,
  EventStorm,
  OutOfRange,
  EpsilonTooLarge,
  SplitInfeasible,
  AlphaTooLarge,
  ScheduleInfeasible,
  OutOfStrip,
  InvariantViolation,
  ConfigError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psys
