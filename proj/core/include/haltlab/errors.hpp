#pragma once

#include <stdexcept>
#include <string>

namespace haltlab {

// Base of every error raised by the library. Per-sample failures in the
// harness are caught at this level and turned into discard counters.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* reason() const noexcept { return "Error"; }
};

#define HALTLAB_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* reason() const noexcept override { return #Name; }   \
  };

HALTLAB_DEFINE_ERROR(IterationLimitExceeded)
HALTLAB_DEFINE_ERROR(HorizonExceeded)
HALTLAB_DEFINE_ERROR(StepInvalid)
HALTLAB_DEFINE_ERROR(NotPositiveDefinite)
HALTLAB_DEFINE_ERROR(ProfileInvalid)
HALTLAB_DEFINE_ERROR(AspectTooSmall)
HALTLAB_DEFINE_ERROR(DegenerateSample)
HALTLAB_DEFINE_ERROR(DegenerateGap)
HALTLAB_DEFINE_ERROR(ScalingViolation)
HALTLAB_DEFINE_ERROR(ConfigInvalid)
HALTLAB_DEFINE_ERROR(MismatchedConfig)
HALTLAB_DEFINE_ERROR(InsufficientSamples)
HALTLAB_DEFINE_ERROR(IoError)

#undef HALTLAB_DEFINE_ERROR

}  // namespace haltlab
