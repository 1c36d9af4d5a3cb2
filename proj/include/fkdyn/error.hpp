#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fkdyn {

enum class ErrorCode {
  NotPeriodic,
  BadSchedule,
  HorizonTooShort,
  BruteTooLarge,
  HorizonMismatch,
  LengthMismatch,
  SupportTooLarge,
  ProblemTooLarge,
  InfeasibleMarginals,
  NotGoodApproximation,
  InvalidPeriods,
  BudgetInfeasible,
  MissingWeight,
  NoAdequateMatch,
  NoGoodCut,
  UnknownExperiment,
  InvalidConfig,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fkdyn
