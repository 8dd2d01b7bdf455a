#pragma once

#include <stdexcept>
#include <string>

namespace sfbif {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (dimension mismatch,
/// parameter outside the path domain, resonant input where an index is
/// required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to converge or a truncation failed to
/// stabilize.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfbif
