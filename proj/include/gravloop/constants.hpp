#ifndef GRAVLOOP_CONSTANTS_HPP
#define GRAVLOOP_CONSTANTS_HPP

#include <cmath>
#include <stdexcept>

namespace gravloop {

inline constexpr const char* kVersion = "0.1.0";

// Default tolerances used across the library.
inline constexpr double kUnitModulusTol = 1e-9;
inline constexpr double kPoleTol = 1e-12;

/// Physical constants in natural units (hbar = 1 unless configured).
struct PhysicalConstants {
    double hbar = 1.0;

    PhysicalConstants() = default;
    explicit PhysicalConstants(double hbar_value) : hbar(hbar_value) {
        if (!(std::isfinite(hbar) && hbar > 0.0)) {
            throw std::domain_error("PhysicalConstants: hbar must be finite and > 0");
        }
    }
};

} // namespace gravloop

#endif // GRAVLOOP_CONSTANTS_HPP
