#pragma once

#include <stdexcept>
#include <string>

namespace rccloop {

// Base class for every typed failure raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define RCCLOOP_DEFINE_ERROR(NAME)                                            \
  class NAME : public Error {                                                 \
  public:                                                                     \
    using Error::Error;                                                       \
  };

RCCLOOP_DEFINE_ERROR(CapExceeded)
RCCLOOP_DEFINE_ERROR(ElementNotInGroup)
RCCLOOP_DEFINE_ERROR(NotASubgroup)
RCCLOOP_DEFINE_ERROR(NotTransitive)
RCCLOOP_DEFINE_ERROR(NotOddPrime)
RCCLOOP_DEFINE_ERROR(NotPrimePower)
RCCLOOP_DEFINE_ERROR(QTooSmall)
RCCLOOP_DEFINE_ERROR(QTooLarge)
RCCLOOP_DEFINE_ERROR(InvalidTable)
RCCLOOP_DEFINE_ERROR(NotAFolder)
RCCLOOP_DEFINE_ERROR(DegreeTooLarge)
RCCLOOP_DEFINE_ERROR(NonIntegerOrbitCount)
RCCLOOP_DEFINE_ERROR(NotGenerating)
RCCLOOP_DEFINE_ERROR(CountMismatch)
RCCLOOP_DEFINE_ERROR(IsoCollision)
RCCLOOP_DEFINE_ERROR(StructureViolation)
RCCLOOP_DEFINE_ERROR(MismatchFound)
RCCLOOP_DEFINE_ERROR(BudgetExceeded)
RCCLOOP_DEFINE_ERROR(InvalidArgument)
RCCLOOP_DEFINE_ERROR(InternalError)

#undef RCCLOOP_DEFINE_ERROR

}  // namespace rccloop
