#pragma once

#include <stdexcept>
#include <string>

namespace boresight {

// Every way a configuration can be rejected or a run can abort.
enum class ErrorCode {
  ConfigInvalid,
  UnknownPreset,
  OutsideDomain,      // boresight entered a forbidden cone
  RateLimitViolated,  // a body-rate component reached its limit
  EnvelopeViolated,   // transformed error reached 1 (performance envelope breached)
  NonFiniteState,     // integration produced NaN/Inf
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace boresight
