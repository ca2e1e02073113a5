#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace websmith {

/// Base class for all library failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands that cannot be combined (jets at different base points, wrong orders, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Argument outside the admissible domain (Im tau too small, degenerate modulus, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation at (or numerically at) a pole of a meromorphic quotient.
class PoleError : public Error {
public:
    PoleError(const std::string& what, std::complex<double> where)
        : Error(what), location_(where) {}

    std::complex<double> location() const noexcept { return location_; }

private:
    std::complex<double> location_;
};

/// Iterative solve that failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Result that is numerically meaningless (e.g. a rank above the Bol bound).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Transversality breakdown at a base point or sample.
class TransversalityError : public Error {
public:
    using Error::Error;
};

}  // namespace websmith
