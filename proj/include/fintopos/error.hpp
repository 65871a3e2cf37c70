#pragma once

#include <stdexcept>
#include <string>

namespace fintopos {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller
/// (unknown id, element outside a value set, mismatched bases, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search exceeded its declared budget. Results are never
/// silently truncated; the caller has to widen the budget or narrow the input.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fintopos
