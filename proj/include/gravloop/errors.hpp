#ifndef GRAVLOOP_ERRORS_HPP
#define GRAVLOOP_ERRORS_HPP

#include <stdexcept>

namespace gravloop {

// A phase or loop factor failed the unit-modulus check.
struct UnitarityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 1 - beta^2 U^2 is too close to zero for the closed-form amplitudes.
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The loop series does not converge (beta*|U| >= 1).
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A stated precondition (e.g. equal arm traversal times) does not hold.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gravloop

#endif // GRAVLOOP_ERRORS_HPP
