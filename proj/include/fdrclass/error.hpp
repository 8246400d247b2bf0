#ifndef FDRCLASS_ERROR_HPP
#define FDRCLASS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fdrclass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Target value outside the range of a monotone function being inverted.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Natural model parameters could not be recovered from (C, tau).
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Nominal level outside the admissible interval of a threshold rule.
class LevelError : public Error {
public:
    using Error::Error;
};

/// Problem size above a documented computational cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A hypothesis of a bound evaluator is violated.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// A one-dimensional solver failed to bracket or converge.
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace fdrclass

#endif // FDRCLASS_ERROR_HPP
