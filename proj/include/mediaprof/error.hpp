#pragma once

#include <stdexcept>
#include <string>

namespace mediaprof {

/// Base class for problems with input data (files, labels, bundles).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
public:
    using DataError::DataError;
};

class ValidationError : public DataError {
public:
    using DataError::DataError;
};

class NotFoundError : public DataError {
public:
    using DataError::DataError;
};

/// A feature extractor could not process its input (e.g. an unparseable URL).
class ExtractionError : public DataError {
public:
    using DataError::DataError;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what)
{
    if (!condition)
        throw ContractViolation(what);
}

} // namespace mediaprof
