#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phedra {

enum class ErrorCode {
  PointOffPlane,
  PointAtInfinity,
  InvalidApexTriple,
  InvalidInput,
  DegenerateFrame,
  TranslationUndefined,
  DegenerateK,
  ScissorRequiresAllPlus,
  NonPlanarMesh,
  ValidationFailed,
  OutOfDomain,
  ComplexBranch,
  NotALimit,
  Rigid,
  Indeterminate,
  GridMismatch,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Errors raised while evaluating a deformation outside its real domain.
bool is_numeric_domain(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace phedra
