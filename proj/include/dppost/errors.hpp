#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dppost {

class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
        : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                                ", got " + std::to_string(actual)),
          expected_(expected), actual_(actual) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

// The state handed to a constraint query violates the system beyond tolerance.
class InfeasibleState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoFeasiblePoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyInterval : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AcceptanceTooLow : public std::runtime_error {
public:
    AcceptanceTooLow(std::size_t kept, std::size_t attempts)
        : std::runtime_error("rejection sampler kept " + std::to_string(kept) + " of " +
                             std::to_string(attempts) + " attempts"),
          kept_(kept), attempts_(attempts) {}

    double acceptance_probability() const noexcept {
        return attempts_ == 0 ? 0.0 : static_cast<double>(kept_) / static_cast<double>(attempts_);
    }

private:
    std::size_t kept_;
    std::size_t attempts_;
};

class KeyMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input data (CSV / JSON); message carries row and column context.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dppost
