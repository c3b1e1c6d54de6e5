#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace dealersim {

/// Base of every domain error raised by the library. The CLI maps the
/// concrete subclasses onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration value violates its invariant. `field()` names the key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class InsufficientHistory : public Error {
public:
    InsufficientHistory(std::size_t needed, std::size_t available)
        : Error("insufficient history: need " + std::to_string(needed) +
                " values, have " + std::to_string(available)),
          needed_(needed), available_(available) {}

    std::size_t needed() const noexcept { return needed_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t needed_;
    std::size_t available_;
};

class DegenerateWindow : public Error {
public:
    using Error::Error;
};

class NoEstimates : public Error {
public:
    NoEstimates() : Error("no estimates") {}
};

class UnderdeterminedFit : public Error {
public:
    UnderdeterminedFit() : Error("underdetermined fit: need at least 2 distinct x values") {}
};

/// The simulation hit `max_steps` before producing the requested ticks.
class MarketStalled : public Error {
public:
    MarketStalled(std::size_t ticks, std::size_t requested, std::size_t steps)
        : Error("market stalled: " + std::to_string(ticks) + " of " +
                std::to_string(requested) + " ticks after " +
                std::to_string(steps) + " steps"),
          ticks_(ticks) {}

    std::size_t ticks_obtained() const noexcept { return ticks_; }

private:
    std::size_t ticks_;
};

/// Malformed input file. `line()` is 1-based; 0 when not line specific.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dealersim
