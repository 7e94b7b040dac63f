#pragma once

#include <stdexcept>
#include <string>

namespace folkswarm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected user input: malformed files, invalid configuration, unknown ids.
/// The command-line tool maps this to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace folkswarm
