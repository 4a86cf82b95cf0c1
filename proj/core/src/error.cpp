#include "rslab/error.hpp"

namespace rslab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::CompositeCharacteristic: return "CompositeCharacteristic";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::InvalidFieldSpec: return "InvalidFieldSpec";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::MixedFields: return "MixedFields";
    case Errc::ElementOutOfRange: return "ElementOutOfRange";
    case Errc::WrongCoefficientCount: return "WrongCoefficientCount";
    case Errc::DuplicateX: return "DuplicateX";
    case Errc::EnumerationTooLarge: return "EnumerationTooLarge";
    case Errc::PuncturedNotSupported: return "PuncturedNotSupported";
    case Errc::InvalidDegree: return "InvalidDegree";
    case Errc::InvalidPositions: return "InvalidPositions";
    case Errc::MismatchedField: return "MismatchedField";
    case Errc::UnknownPosition: return "UnknownPosition";
    case Errc::InvalidProbability: return "InvalidProbability";
    case Errc::SizeExceedsField: return "SizeExceedsField";
    case Errc::ZeroProbability: return "ZeroProbability";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::DualTooLarge: return "DualTooLarge";
    case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::ProbabilityTooSmallForS: return "ProbabilityTooSmallForS";
    case Errc::WrongWidth: return "WrongWidth";
    case Errc::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace rslab
