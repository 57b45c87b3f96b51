#pragma once

#include <stdexcept>
#include <string>

namespace locdiff {

// All numerical-contract violations derive from Error and carry a stable
// machine-readable code string (used verbatim by the CLI error objects).
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

#define LOCDIFF_DEFINE_ERROR(Name, code_literal)                        \
  class Name : public Error {                                           \
  public:                                                               \
    explicit Name(const std::string& what) : Error(code_literal, what) {} \
  }

LOCDIFF_DEFINE_ERROR(NotADiffeomorphism, "not_a_diffeomorphism");
LOCDIFF_DEFINE_ERROR(ModeOverflow, "mode_overflow");
LOCDIFF_DEFINE_ERROR(ConvergenceFailure, "convergence_failure");
LOCDIFF_DEFINE_ERROR(CoverageGap, "coverage_gap");
LOCDIFF_DEFINE_ERROR(OutsideNeighborhood, "outside_neighborhood");
LOCDIFF_DEFINE_ERROR(SlicingFailure, "slicing_failure");
LOCDIFF_DEFINE_ERROR(NotApplicable, "not_applicable");
LOCDIFF_DEFINE_ERROR(Infeasible, "infeasible");
LOCDIFF_DEFINE_ERROR(StepTooLarge, "step_too_large");
LOCDIFF_DEFINE_ERROR(WordTooLong, "word_too_long");
LOCDIFF_DEFINE_ERROR(ValidationError, "validation_error");

#undef LOCDIFF_DEFINE_ERROR

}  // namespace locdiff
