#pragma once

#include <stdexcept>
#include <string>

namespace ssg {

// Base of every error thrown by the toolkit. Callers that only need a
// diagnostic can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad spec, bad range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Hypothesis / class / profile shapes disagree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed its configured ceiling.
class CeilingExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed input file or record.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssg
