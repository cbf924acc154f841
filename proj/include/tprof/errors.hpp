#pragma once

#include <stdexcept>
#include <string>

namespace tprof {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A source or destination could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input data is malformed or inconsistent beyond what can be skipped.
class DataError : public Error {
public:
    using Error::Error;
};

/// Bad parameter or unknown name supplied by the caller.
class UsageError : public Error {
public:
    using Error::Error;
};

/// The brute-force oracle declined an input that is too large for it.
class OracleRefusal : public Error {
public:
    using Error::Error;
};

/// Wraps a failure raised inside a pipeline stage.
class StageError : public Error {
public:
    enum class Kind { usage, data, internal };

    StageError(std::string stage, Kind kind, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)), kind_(kind) {}

    const std::string& stage() const noexcept { return stage_; }
    Kind kind() const noexcept { return kind_; }

private:
    std::string stage_;
    Kind kind_;
};

} // namespace tprof
