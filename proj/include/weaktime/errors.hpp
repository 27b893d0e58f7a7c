#pragma once

#include <stdexcept>
#include <string>

namespace weaktime {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anything that is wrong with the inputs themselves: malformed scenarios,
// invalid operators or states. The CLI maps these to exit status 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

#define WEAKTIME_ERROR(Name, Base)   \
  class Name : public Base {         \
   public:                           \
    using Base::Base;                \
  };

WEAKTIME_ERROR(NotHermitian, ValidationError)
WEAKTIME_ERROR(DimMismatch, ValidationError)
WEAKTIME_ERROR(InvalidState, ValidationError)
WEAKTIME_ERROR(InvalidProjector, ValidationError)
WEAKTIME_ERROR(IncompleteObservable, ValidationError)
WEAKTIME_ERROR(IncompleteFinals, ValidationError)
WEAKTIME_ERROR(DegenerateInput, ValidationError)
WEAKTIME_ERROR(NegativeTime, ValidationError)
WEAKTIME_ERROR(UnknownIndex, ValidationError)
WEAKTIME_ERROR(GridTooSmall, ValidationError)
WEAKTIME_ERROR(ZeroCoupling, ValidationError)
WEAKTIME_ERROR(ParseError, ValidationError)

WEAKTIME_ERROR(NumericalFailure, Error)
WEAKTIME_ERROR(VanishingPostselection, Error)
WEAKTIME_ERROR(SingularPostselection, Error)
WEAKTIME_ERROR(MixedStateUnsupported, Error)
WEAKTIME_ERROR(IOError, Error)

#undef WEAKTIME_ERROR

}  // namespace weaktime
