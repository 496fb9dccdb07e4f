#pragma once

#include <stdexcept>
#include <string>

namespace qmhyp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical precondition does not hold (inadmissible parity, wrong weight, zero divisor...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Raised by decompose_roman for parity combinations without a proven decomposition.
class NotCoveredError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A CM registry lacks a point or a generator value required by an evaluation.
class MissingValueError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Operands live in different number fields, or a required element is not in the field.
class FieldError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A q-series could not be identified inside the expected graded ring.
class RecognitionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A truncated series or numeric computation cannot reach the requested accuracy.
class PrecisionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed input files (registry JSON and friends).
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace qmhyp
