#pragma once

#include <stdexcept>
#include <string>

namespace lpmask {

/// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not line up; the message names both shapes.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Inversion or solving was attempted on a matrix with zero determinant.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Input data parsed but fails a semantic invariant (bad key, bad file).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Input text does not match the expected grammar.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A randomized construction hit its attempt cap without success.
class ResamplingExhausted : public Error {
public:
  using Error::Error;
};

/// The brute-force oracle declines an instance it cannot adjudicate.
class OracleRefusal : public Error {
public:
  using Error::Error;
};

/// A certificate could not be checked either way; callers should skip.
class UnverifiedError : public Error {
public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug, not bad input.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace lpmask
