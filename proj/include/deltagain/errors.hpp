// errors.hpp — Exception types for solver and I/O failure modes.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace deltagain {

// Steady-state generator is singular or too ill-conditioned to trust.
class DegenerateSteadyStateError : public std::runtime_error {
public:
    DegenerateSteadyStateError(std::string what, double condition_number,
                               std::optional<double> detuning = std::nullopt)
        : std::runtime_error(std::move(what)),
          condition_number_(condition_number),
          detuning_(detuning) {}

    double condition_number() const noexcept { return condition_number_; }
    // Set when the failure happened inside a detuning scan.
    std::optional<double> detuning() const noexcept { return detuning_; }

private:
    double condition_number_;
    std::optional<double> detuning_;
};

// Adaptive stepper drove the step size below the representable floor.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(std::string what, double t_reached)
        : std::runtime_error(std::move(what)), t_reached_(t_reached) {}

    double t_reached() const noexcept { return t_reached_; }

private:
    double t_reached_;
};

// Relaxation did not settle within the sampling horizon.
class ConvergenceTimeoutError : public std::runtime_error {
public:
    ConvergenceTimeoutError(std::string what, double t_max)
        : std::runtime_error(std::move(what)), t_max_(t_max) {}

    double t_max() const noexcept { return t_max_; }

private:
    double t_max_;
};

// Requested bracket does not contain an interior minimum.
class BracketingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation that requires a steady state was handed a transient one.
class NotSteadyError : public std::invalid_argument {
public:
    NotSteadyError(std::string what, double residual)
        : std::invalid_argument(std::move(what)), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Run-configuration text could not be parsed; carries line and key context.
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(std::string what, int line, std::string key)
        : std::runtime_error(std::move(what)), line_(line), key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

} // namespace deltagain
