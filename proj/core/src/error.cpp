#include "hermiflow/error.hpp"

namespace hermiflow {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SlotOutOfRange: return "SLOT_OUT_OF_RANGE";
    case ErrorCode::DimensionMismatch: return "DIMENSION";
    case ErrorCode::VarianceMismatch: return "VARIANCE";
    case ErrorCode::WrongOrder: return "WRONG_ORDER";
    case ErrorCode::NotAlmostComplex: return "J_SQUARED";
    case ErrorCode::Incompatible: return "INCOMPATIBLE";
    case ErrorCode::NotPositiveDefinite: return "NOT_SPD";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::Jacobi: return "JACOBI";
    case ErrorCode::InconsistentInputs: return "INCONSISTENT_INPUTS";
    case ErrorCode::Syntax: return "SYNTAX";
    case ErrorCode::ClassMismatch: return "CLASS_MISMATCH";
    case ErrorCode::UnknownScenario: return "UNKNOWN_SCENARIO";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace hermiflow
