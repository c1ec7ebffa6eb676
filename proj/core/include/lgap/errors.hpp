// errors.hpp: exception types raised by the lgap core library

#pragma once

#include <stdexcept>
#include <string>

namespace lgap {

/// Base class for every error thrown by lgap.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Local frame is not a basis (singular Gram matrix).
class BasisDegenerate : public Error {
public:
    using Error::Error;
};

/// Operands have incompatible dimensions or an index is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Model terms violate the Lindblad form (negative rate, non-Hermitian H,
/// support outside the lattice, ...).
class InvalidModel : public Error {
public:
    using Error::Error;
};

class NotMagnetizationConserving : public InvalidModel {
public:
    using InvalidModel::InvalidModel;
};

class KmsViolation : public InvalidModel {
public:
    using InvalidModel::InvalidModel;
};

/// A structural precondition failed (block triangularity, Hermitian blocks,
/// positive definite reference state).
class StructureError : public Error {
public:
    using Error::Error;
};

/// Dense eigensolver requested above the configured size limit, or a
/// factorization failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace lgap
