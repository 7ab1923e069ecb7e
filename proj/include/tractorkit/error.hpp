#pragma once

#include <stdexcept>
#include <string>

namespace tk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes, dimensions or slot variances of operands do not fit together.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Exact division by zero, or a jet division whose divisor has zero constant
/// term. Field evaluation at a pole surfaces as this error.
class EvaluationSingularity : public Error {
 public:
  using Error::Error;
};

/// A jet is too short for the requested number of derivatives.
class InsufficientOrder : public Error {
 public:
  using Error::Error;
};

/// An algebraic precondition (trace-freeness, symmetry, Einstein condition,
/// validity of Q inputs, ...) does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// The Weyl map T*M -> L2T*M (x) T*M has a kernel at the point, or a natural
/// determinant vanishes, so no left inverse exists there.
class GenericityFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed expression, manifest or report text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tk
