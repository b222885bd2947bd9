#include "boresight/errors.hpp"

namespace boresight {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:     return "ConfigInvalid";
    case ErrorCode::UnknownPreset:     return "UnknownPreset";
    case ErrorCode::OutsideDomain:     return "OutsideDomain";
    case ErrorCode::RateLimitViolated: return "RateLimitViolated";
    case ErrorCode::EnvelopeViolated:  return "EnvelopeViolated";
    case ErrorCode::NonFiniteState:    return "NonFiniteState";
    case ErrorCode::IoError:           return "IoError";
  }
  return "Unknown";
}

}  // namespace boresight
