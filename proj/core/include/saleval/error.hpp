#pragma once

#include <stdexcept>
#include <string>

namespace saleval {

enum class ErrorCode {
  NegativeValue,
  NonFinite,
  EmptyMap,
  ZeroMass,
  OutOfBounds,
  NonPositiveSigma,
  ShapeMismatch,
  EmptyFixations,
  EmptyNegativePool,
  UnbalancedProblem,
  NumericalFailure,
  KernelShapeMismatch,
  ChannelNotDivisible,
  WeightShapeMismatch,
  InvalidSpec,
  SplitMismatch,
  ParseError,
  MissingField,
  DuplicateImageId,
  EmptyReport,
  DegenerateInput,
  MismatchedImageSets,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace saleval
