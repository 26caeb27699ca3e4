#pragma once

#include <stdexcept>
#include <string>

namespace minap {

enum class ErrorCode {
  InvalidSpec,
  OutOfRange,
  Unbounded,
  FiniteGroup,
  SupportMismatch,
  BudgetExceeded,
  ZeroElement,
  InvalidParams,
  NoCycleDetected,
  DegenerateTarget,
  OrderMismatch,
  NotABasis,
  ExpInfinite,
  WindowInsufficient,
  HypothesisFail,
  CriterionFail,
  NotEventuallyPeriodic,
  ParseError,
  Unsupported,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Parse failures carry a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace minap
