#pragma once

#include <stdexcept>
#include <string>

namespace enmod {

/// Thrown when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by distribution-dependent operations on a moments-only channel.
class NotSamplable : public std::logic_error {
public:
    NotSamplable() : std::logic_error("channel is not samplable (moments only)") {}
};

/// Thrown when the energy MGF is evaluated at or beyond its divergence point.
class DivergentMgf : public std::domain_error {
public:
    explicit DivergentMgf(double theta_max)
        : std::domain_error("divergent MGF: theta must stay below " + std::to_string(theta_max)),
          theta_max_(theta_max) {}

    double theta_max() const noexcept { return theta_max_; }

private:
    double theta_max_;
};

namespace detail {

inline void require(bool ok, const char* message) {
    if (!ok) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace enmod
