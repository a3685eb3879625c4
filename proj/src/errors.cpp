#include "psys/errors.hpp"

namespace psys {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InadmissibleRatio: return "InadmissibleRatio";
    case ErrorCode::VacuumReached: return "VacuumReached";
    case ErrorCode::NoMiddleState: return "NoMiddleState";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DegenerateShock: return "DegenerateShock";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::NotApproaching: return "NotApproaching";
    case ErrorCode::EventStorm: return "EventStorm";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::SplitInfeasible: return "SplitInfeasible";
    case ErrorCode::AlphaTooLarge: return "AlphaTooLarge";
    case ErrorCode::ScheduleInfeasible: return "ScheduleInfeasible";
    case ErrorCode::OutOfStrip: return "OutOfStrip";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace psys
