#pragma once

#include <stdexcept>
#include <string>

namespace gridcop {

// All library errors derive from Error so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

struct EpsilonOutOfRange : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

struct DegenerateGrid : Error {
  using Error::Error;
};

struct SingularWeights : Error {
  using Error::Error;
};

struct EmptyChain : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace gridcop
