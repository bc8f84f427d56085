#pragma once

#include <stdexcept>
#include <string>

namespace fieldcensus {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FIELDCENSUS_DEFINE_ERROR(Name)                         \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  };

// exactmath
FIELDCENSUS_DEFINE_ERROR(NonSquarefree)
FIELDCENSUS_DEFINE_ERROR(PrecisionExhausted)
// hunter
FIELDCENSUS_DEFINE_ERROR(UnsupportedDegree)
FIELDCENSUS_DEFINE_ERROR(SinkFailure)
FIELDCENSUS_DEFINE_ERROR(CheckpointError)
// orders
FIELDCENSUS_DEFINE_ERROR(FactorizationIncomplete)
// galois
FIELDCENSUS_DEFINE_ERROR(OrderCapExceeded)
FIELDCENSUS_DEFINE_ERROR(AmbiguousAfterSampling)
// census
FIELDCENSUS_DEFINE_ERROR(BeyondCertifiedBound)
FIELDCENSUS_DEFINE_ERROR(NonpositiveErrorTerm)
FIELDCENSUS_DEFINE_ERROR(RankDeficient)
FIELDCENSUS_DEFINE_ERROR(FormatVersionMismatch)
FIELDCENSUS_DEFINE_ERROR(ParseError)
// heuristics
FIELDCENSUS_DEFINE_ERROR(PrecisionUnreachable)
FIELDCENSUS_DEFINE_ERROR(BadSupport)
FIELDCENSUS_DEFINE_ERROR(MissingClassData)

#undef FIELDCENSUS_DEFINE_ERROR

}  // namespace fieldcensus
