#pragma once

#include <stdexcept>
#include <string>

namespace curbalert {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define CURBALERT_ERROR(Name)                                    \
  class Name : public Error {                                    \
  public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}      \
  }

// geometry
CURBALERT_ERROR(HorizonError);
CURBALERT_ERROR(OutOfFrame);
CURBALERT_ERROR(ConfigError);

// mask analysis
CURBALERT_ERROR(EmptyInstance);
CURBALERT_ERROR(DegenerateContour);
CURBALERT_ERROR(NoCurb);
CURBALERT_ERROR(PgmError);

// audio
CURBALERT_ERROR(NoAlert);
CURBALERT_ERROR(ChannelMismatch);
CURBALERT_ERROR(BadAngle);
CURBALERT_ERROR(IoError);

// eval
CURBALERT_ERROR(DimensionMismatch);
CURBALERT_ERROR(EmptyGroundTruth);
CURBALERT_ERROR(EmptyUnion);
CURBALERT_ERROR(NonTermination);

// protocol
CURBALERT_ERROR(ProtocolError);

#undef CURBALERT_ERROR

}  // namespace curbalert
