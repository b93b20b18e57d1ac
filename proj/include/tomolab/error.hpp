#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tomolab {

enum class ErrorCode {
  NonHermitianInput,
  EigensolveFailure,
  DimensionOverflow,
  DimensionMismatch,
  BadDimension,
  NonOrthonormalVectors,
  WrongBasisKind,
  InvalidDensity,
  BetaOutOfRange,
  IdentityIndex,
  InfeasibleSpec,
  NonMeasurableObservable,
  DesignMismatch,
  LengthMismatch,
  NegativeResult,
  UnsupportedArity,
  ZeroDensity,
  ZeroWeight,
  InvalidArgument,
  ParseError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tomolab
