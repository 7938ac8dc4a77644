#pragma once

#include <stdexcept>
#include <string>

namespace ehz {

/**
 * Error taxonomy. Validation errors describe rejected input (CLI exit 2),
 * solver errors describe failures of a well-posed computation (CLI exit 3).
 * Each error carries a stable machine-readable code alongside the message.
 */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace ehz
