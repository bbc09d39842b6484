#pragma once

#include <stdexcept>
#include <string>

namespace csoigo {

// Error taxonomy shared by the library and the CLI. The CLI maps each
// category to its own exit code (usage 2, data 3, numeric 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of its documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input files or in-memory data are missing, malformed, or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

// A factorization or solve failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace csoigo
