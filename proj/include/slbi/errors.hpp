#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slbi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors caused by bad user input (shapes, hyperparameters, files).
/// The CLI maps these to exit status 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Errors raised by a numerical procedure on otherwise valid input.
/// The CLI maps these to exit status 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class InvalidMatrix : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InvalidHyperparam : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InvalidDimension : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InvalidRecord : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ConfigError(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DegenerateLabels : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class PathTooShort : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class OutOfRange : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A Split LBI iterate became non-finite.
class DivergenceDetected : public NumericError {
public:
    DivergenceDetected(std::size_t k, double step_times_hessian_norm)
        : NumericError("non-finite iterate at k=" + std::to_string(k) +
                       " (kappa*alpha*||H||_2 = " + std::to_string(step_times_hessian_norm) + ")"),
          k_(k),
          step_norm_(step_times_hessian_norm) {}

    std::size_t iteration() const noexcept { return k_; }
    double step_times_hessian_norm() const noexcept { return step_norm_; }

private:
    std::size_t k_;
    double step_norm_;
};

class SingularRestrictedSigma : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularSigmaSS : public NumericError {
public:
    using NumericError::NumericError;
};

class NoProgress : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace slbi
