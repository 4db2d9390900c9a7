#ifndef DEFLATE_ERRORS_HPP
#define DEFLATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace deflate {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A pivot of a coarse (or any small dense) factorization fell below threshold.
class SingularCoarseMatrix : public Error {
 public:
  using Error::Error;
};

class EigNonConvergence : public Error {
 public:
  using Error::Error;
};

/// Pure-Neumann component with a source that does not sum to zero.
class SingularProblem : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class HarmonicRitzFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace deflate

#endif
