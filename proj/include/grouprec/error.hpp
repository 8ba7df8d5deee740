#pragma once

#include <stdexcept>
#include <string>

namespace grouprec {

// Exit codes used by the command line tool.
enum class ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept = 0;
};

// Bad configuration or parameter values.
class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::kUsage; }
};

// Malformed, missing or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::kData; }
};

// Eigensolver breakdown, non-finite intermediate values.
class NumericalError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::kNumerical; }
};

}  // namespace grouprec
