#pragma once

#include <stdexcept>
#include <string>

namespace sparta {

// Base of all library errors. The CLI maps each subtype to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Raised when a model is structurally infeasible before or after solving.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SizeLimitError : public Error {
public:
    using Error::Error;
};

class NameCollisionError : public Error {
public:
    using Error::Error;
};

class SolutionMismatchError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

// Process exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumeric = 4;

// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& error);

} // namespace sparta
