#pragma once

#include <stdexcept>
#include <string>

namespace pichan {

// Root of every exception thrown by the toolchain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A binding input reached an operation that only accepts core terms.
class SurfaceFormError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pichan
