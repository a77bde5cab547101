#pragma once

#include <stdexcept>
#include <string>

namespace mechcomplete {

/// Base of every error raised by the library. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration and input-file problems (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

class UnknownField : public ConfigError {
public:
    explicit UnknownField(const std::string& name)
        : ConfigError("unknown field '" + name + "' (not in the canonical ontology)"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Malformed skill or scenario document. `line` is 1-based, 0 when unknown.
class SchemaError : public ConfigError {
public:
    SchemaError(std::string source, int line, const std::string& message)
        : ConfigError(format(source, line, message)), source_(std::move(source)), line_(line) {}
    const std::string& source() const noexcept { return source_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& source, int line, const std::string& message) {
        std::string out = source.empty() ? std::string("<input>") : source;
        if (line > 0) out += ":" + std::to_string(line);
        return out + ": " + message;
    }
    std::string source_;
    int line_;
};

class DuplicateId : public ConfigError {
public:
    explicit DuplicateId(const std::string& id) : ConfigError("duplicate skill id '" + id + "'") {}
};

class UnsatisfiableInput : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MissingPrior : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NegativeCoefficient : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class OutOfRange : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numerical failures (CLI exit code 4).
class NumericalError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class LinearSolveFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace mechcomplete
