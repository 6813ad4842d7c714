#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arfrac {

enum class ErrorCode {
  ParseError,
  SpaceMismatch,
  UnsupportedMapKind,
  ZeroProjectivePoint,
  NonExpandingWeight,
  InvalidArgument,
  BoundTooLarge,
  NonTerminating,
  GridExceedsBound,
  InsufficientData,
  UnsupportedSpace,
  PointNotOnCurve,
  PrecisionNotReached,
  GeneratorIsTorsion,
  ConfigParse,
  MissingFile,
  ValidationFailed,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `module` names the originating
/// module so the CLI can render codes like "enumeration.NonTerminating".
class Error : public std::runtime_error {
 public:
  Error(std::string module, ErrorCode code, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)), code_(code) {}

  const std::string& module() const noexcept { return module_; }
  ErrorCode code() const noexcept { return code_; }
  std::string qualified_code() const { return module_ + "." + std::string(to_string(code_)); }

 private:
  std::string module_;
  ErrorCode code_;
};

}  // namespace arfrac
