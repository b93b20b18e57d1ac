#include "tomolab/error.hpp"

namespace tomolab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::EigensolveFailure: return "EigensolveFailure";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::NonOrthonormalVectors: return "NonOrthonormalVectors";
    case ErrorCode::WrongBasisKind: return "WrongBasisKind";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::IdentityIndex: return "IdentityIndex";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::NonMeasurableObservable: return "NonMeasurableObservable";
    case ErrorCode::DesignMismatch: return "DesignMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeResult: return "NegativeResult";
    case ErrorCode::UnsupportedArity: return "UnsupportedArity";
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tomolab
