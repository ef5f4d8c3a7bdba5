#ifndef CAGAP_ERRORS_HPP
#define CAGAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cagap {

/// A parameter lies outside the domain required by an operation.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A control value outside the control set of the state it was applied at.
class InfeasibleControl : public std::runtime_error {
public:
    InfeasibleControl(const std::string& what, long long time_index)
        : std::runtime_error(what + " (t = " + std::to_string(time_index) + ")"),
          time_index_(time_index) {}

    long long time_index() const noexcept { return time_index_; }

private:
    long long time_index_;
};

/// Error envelopes too wide to say anything about the limits.
class InsufficientResolution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-point iteration hit its cap before reaching the requested tolerance.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, long long iteration_cap)
        : std::runtime_error(what), iteration_cap_(iteration_cap) {}

    long long iteration_cap() const noexcept { return iteration_cap_; }

private:
    long long iteration_cap_;
};

} // namespace cagap

#endif // CAGAP_ERRORS_HPP
