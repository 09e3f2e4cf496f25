#pragma once

#include <stdexcept>
#include <string>

namespace zcorr {

/// Requested size exceeds a hard implementation limit (generator count,
/// enumeration width, ...).  Distinct from a mathematical domain error.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A matrix that must be inverted or factored is numerically unusable.
/// Carries the condition-number estimate that triggered the rejection.
class IllConditionedError : public std::domain_error {
public:
    IllConditionedError(const std::string& what, double cond_estimate)
        : std::domain_error(what), cond_(cond_estimate) {}
    double condition_estimate() const noexcept { return cond_; }

private:
    double cond_;
};

/// An element with vanishing scalar part has no inverse in the even
/// subalgebra; also raised for singular pivots during elimination.
class NotInvertibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quantity that must be real (up to roundoff) came out with a
/// substantial imaginary part.  Always indicates an internal inconsistency,
/// never bad user input.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace zcorr
