#pragma once

#include <stdexcept>
#include <string>

namespace graphmerge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define GRAPHMERGE_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

GRAPHMERGE_DEFINE_ERROR(SingularMatrix);
GRAPHMERGE_DEFINE_ERROR(DimensionMismatch);
GRAPHMERGE_DEFINE_ERROR(BadPartition);
GRAPHMERGE_DEFINE_ERROR(ParseError);
GRAPHMERGE_DEFINE_ERROR(CapacityExceeded);
GRAPHMERGE_DEFINE_ERROR(ForcedOutcomeImpossible);
GRAPHMERGE_DEFINE_ERROR(PolicyExhausted);
GRAPHMERGE_DEFINE_ERROR(InvalidCorrection);
GRAPHMERGE_DEFINE_ERROR(AbortedUpstream);
GRAPHMERGE_DEFINE_ERROR(EmptyHonestSet);
GRAPHMERGE_DEFINE_ERROR(OddInputSum);
GRAPHMERGE_DEFINE_ERROR(UnsupportedCorruption);
GRAPHMERGE_DEFINE_ERROR(OutOfRange);
GRAPHMERGE_DEFINE_ERROR(InvalidParameters);

#undef GRAPHMERGE_DEFINE_ERROR

} // namespace graphmerge
