#include "minap/error.hpp"

namespace minap {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "INVALID_SPEC";
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::Unbounded: return "UNBOUNDED";
    case ErrorCode::FiniteGroup: return "FINITE_GROUP";
    case ErrorCode::SupportMismatch: return "SUPPORT_MISMATCH";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::ZeroElement: return "ZERO_ELEMENT";
    case ErrorCode::InvalidParams: return "INVALID_PARAMS";
    case ErrorCode::NoCycleDetected: return "NO_CYCLE_DETECTED";
    case ErrorCode::DegenerateTarget: return "DEGENERATE_TARGET";
    case ErrorCode::OrderMismatch: return "ORDER_MISMATCH";
    case ErrorCode::NotABasis: return "NOT_A_BASIS";
    case ErrorCode::ExpInfinite: return "EXP_INFINITE";
    case ErrorCode::WindowInsufficient: return "WINDOW_INSUFFICIENT";
    case ErrorCode::HypothesisFail: return "HYPOTHESIS_FAIL";
    case ErrorCode::CriterionFail: return "CRITERION_FAIL";
    case ErrorCode::NotEventuallyPeriodic: return "NOT_EVENTUALLY_PERIODIC";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
  }
  return "UNKNOWN";
}

}  // namespace minap
