#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beamcontact {

/// Argument outside the mathematical domain of an operation (non-finite
/// input, point outside [a,b]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller broke a precondition: bad sizes, mismatched grids, N < 5, K < 0.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Floating-point failure during a computation.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::ptrdiff_t index = -1)
        : std::runtime_error(what), index_(index) {}

    /// Offending row/pivot, or -1 when not tied to a single index.
    [[nodiscard]] std::ptrdiff_t index() const noexcept { return index_; }

private:
    std::ptrdiff_t index_;
};

}  // namespace beamcontact
