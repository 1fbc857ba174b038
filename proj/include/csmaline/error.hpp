#pragma once

#include <stdexcept>
#include <string>

namespace csmaline {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Feasible-state count would exceed the enumeration cap.
class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

/// Capacity matrix requested with beta > n - 1.
class InvalidRange : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace csmaline
