// constants.hpp — physical constants (CODATA 2018) and phase-wrapping helpers.
// All lengths are micrometres and all angles radians throughout the library.

#pragma once

#include <cmath>

namespace sg {

inline constexpr double pi     = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

namespace constants {

// SI values, CODATA 2018
inline constexpr double hbar          = 1.054571817e-34;   // J s
inline constexpr double k_B           = 1.380649e-23;      // J/K
inline constexpr double atomic_mass_u = 1.66053906660e-27; // kg
inline constexpr double m_rb87        = 86.909180531 * atomic_mass_u; // kg

inline constexpr double metre_to_um = 1e6;
inline constexpr double um_to_metre = 1e-6;

} // namespace constants

// Wrap to the half-open interval [-pi, pi).
inline double wrap_phase(double x) {
    double y = x - two_pi * std::floor((x + pi) / two_pi);
    if (y < -pi) y = -pi;          // guard against rounding at the seam
    if (y >= pi) y -= two_pi;
    return y;
}

// Wrap an increment to (-pi, pi]; used when differencing wrapped phases.
inline double wrap_increment(double x) {
    double y = x - two_pi * std::floor((x + pi) / two_pi);
    if (y >= pi) y -= two_pi;
    if (y <= -pi) y += two_pi;     // the -pi representative maps to +pi
    return y;
}

} // namespace sg
