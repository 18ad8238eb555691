#pragma once

#include <stdexcept>

namespace ecmkit {

// Base class for everything this library throws on its own behalf.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: config files, CSV fixtures, bad values.
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid request this machine/kernel pair cannot answer, e.g. a
// SIMD level above the machine's maximum or no timing data for the pair.
struct UnsupportedError : Error {
  using Error::Error;
};

}  // namespace ecmkit
