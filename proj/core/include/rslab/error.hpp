#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rslab {

/// Error categories raised by the library. One enumerator per named failure mode.
enum class Errc {
  CompositeCharacteristic,
  ReducibleModulus,
  FieldTooLarge,
  InvalidFieldSpec,
  DivisionByZero,
  MixedFields,
  ElementOutOfRange,
  WrongCoefficientCount,
  DuplicateX,
  EnumerationTooLarge,
  PuncturedNotSupported,
  InvalidDegree,
  InvalidPositions,
  MismatchedField,
  UnknownPosition,
  InvalidProbability,
  SizeExceedsField,
  ZeroProbability,
  EpsilonOutOfRange,
  DualTooLarge,
  ParameterOutOfRange,
  InvalidGrid,
  ProbabilityTooSmallForS,
  WrongWidth,
  UsageError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rslab
