#ifndef DDSIM_ERRORS_HPP
#define DDSIM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddsim {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad JSON, out-of-range parameter, unknown key).
/// The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A data contract was violated (malformed trace, arity mismatch,
/// contaminated training data). The CLI maps this to exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

/// Measure arity or file layout does not match what the operation expects.
class SchemaError : public DataError {
public:
    using DataError::DataError;
};

/// A trace record failed validation. Carries the 1-based line number of the
/// offending record when it came from a file (0 for in-memory sequences).
class RejectedRecordError : public DataError {
public:
    RejectedRecordError(std::size_t line, const std::string& what)
        : DataError("record at line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Fewer than two training windows: the standard deviation is undefined.
class InsufficientTrainingError : public DataError {
public:
    using DataError::DataError;
};

/// Training input contains windows labeled as attack traffic.
class ContaminatedTrainingError : public DataError {
public:
    using DataError::DataError;
};

/// A queried window has been evicted from an edge detector's retention.
class StaleWindowError : public DataError {
public:
    using DataError::DataError;
};

/// A query was addressed to an edge detector that does not exist.
class UnknownEdgeError : public DataError {
public:
    using DataError::DataError;
};

/// Malformed cooperative-protocol traffic (e.g. mixed window indices).
class ProtocolError : public DataError {
public:
    using DataError::DataError;
};

/// An internal invariant failed. The CLI maps this to exit code 4.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace ddsim

#endif  // DDSIM_ERRORS_HPP
