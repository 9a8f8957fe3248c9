#pragma once

#include <stdexcept>
#include <string>

namespace pscrd {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at a boundary (the CLI does exactly that).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define PSCRD_DEFINE_ERROR(Name)                     \
  class Name : public Error {                        \
  public:                                            \
    explicit Name(const std::string& what_arg)       \
        : Error(std::string(#Name ": ") + what_arg) {} \
  };

// protocol
PSCRD_DEFINE_ERROR(InvalidParams)
PSCRD_DEFINE_ERROR(InsufficientPopulation)
PSCRD_DEFINE_ERROR(ForeignResponse)
PSCRD_DEFINE_ERROR(UnknownBridge)
PSCRD_DEFINE_ERROR(ArchivedBridge)
PSCRD_DEFINE_ERROR(BridgeNotOffline)
PSCRD_DEFINE_ERROR(EmptyMajority)

// metrics
PSCRD_DEFINE_ERROR(DegenerateDistribution)
PSCRD_DEFINE_ERROR(LengthMismatch)

// simulation / configuration / io
PSCRD_DEFINE_ERROR(ConfigError)
PSCRD_DEFINE_ERROR(ParseError)
PSCRD_DEFINE_ERROR(ValidationError)
PSCRD_DEFINE_ERROR(IoError)

#undef PSCRD_DEFINE_ERROR

}  // namespace pscrd
