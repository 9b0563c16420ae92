#include "phedra/errors.hpp"

namespace phedra {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointOffPlane: return "PointOffPlane";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::InvalidApexTriple: return "InvalidApexTriple";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::TranslationUndefined: return "TranslationUndefined";
    case ErrorCode::DegenerateK: return "DegenerateK";
    case ErrorCode::ScissorRequiresAllPlus: return "ScissorRequiresAllPlus";
    case ErrorCode::NonPlanarMesh: return "NonPlanarMesh";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ComplexBranch: return "ComplexBranch";
    case ErrorCode::NotALimit: return "NotALimit";
    case ErrorCode::Rigid: return "Rigid";
    case ErrorCode::Indeterminate: return "Indeterminate";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numeric_domain(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain:
    case ErrorCode::ComplexBranch:
    case ErrorCode::NotALimit:
    case ErrorCode::PointAtInfinity:
    case ErrorCode::Rigid:
    case ErrorCode::Indeterminate:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace phedra
