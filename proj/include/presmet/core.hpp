#pragma once

#include <stdexcept>
#include <string>

namespace presmet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define PRESMET_ERROR_TYPE(Name)                    \
  struct Name : Error {                             \
    explicit Name(const std::string& msg = #Name)   \
        : Error(std::string(#Name) + ": " + msg) {} \
  }

PRESMET_ERROR_TYPE(EmptyWordError);
PRESMET_ERROR_TYPE(CapacityExceeded);
PRESMET_ERROR_TYPE(NoConvergence);
PRESMET_ERROR_TYPE(NotProximal);
PRESMET_ERROR_TYPE(DegenerateConfiguration);
PRESMET_ERROR_TYPE(PingPongFailure);
PRESMET_ERROR_TYPE(RelatorViolation);
PRESMET_ERROR_TYPE(SymmetryViolation);
PRESMET_ERROR_TYPE(EllipticElement);
PRESMET_ERROR_TYPE(InsufficientData);
PRESMET_ERROR_TYPE(BracketFailure);
PRESMET_ERROR_TYPE(StepTooSmall);
PRESMET_ERROR_TYPE(MismatchedIndex);
PRESMET_ERROR_TYPE(ConfigError);

#undef PRESMET_ERROR_TYPE

}  // namespace presmet
