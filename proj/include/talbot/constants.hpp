#ifndef TALBOT_CONSTANTS_HPP
#define TALBOT_CONSTANTS_HPP

#include "talbot/errors.hpp"

namespace talbot::constants {

// CODATA 2018. h, k_B and c are exact by SI definition.
inline constexpr double h       = 6.62607015e-34;     // J s
inline constexpr double hbar    = 1.054571817e-34;    // J s
inline constexpr double k_B     = 1.380649e-23;       // J/K
inline constexpr double c       = 299792458.0;        // m/s
inline constexpr double amu     = 1.66053906660e-27;  // kg
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double debye   = 3.33564095198e-30;  // C m  (1e-21 / c)
inline constexpr double g_standard = 9.80665;         // m/s^2

inline constexpr double pi = 3.14159265358979323846;

} // namespace talbot::constants

namespace talbot {

enum class MassUnit { Da, kg };

inline double convert_mass(double value, MassUnit unit) {
    if (value <= 0.0)
        throw PhysicsError("convert_mass: mass must be positive");
    return unit == MassUnit::Da ? value * constants::amu : value;
}

inline double mass_in_da(double kg) { return kg / constants::amu; }

/// Polarizability volume (Angstrom^3 convention) to SI polarizability, C m^2/V.
inline double polarizability_volume_to_si(double volume_A3) {
    return 4.0 * constants::pi * constants::epsilon0 * volume_A3 * 1e-30;
}

/// Thermal mean square dipole moment, Debye^2 to SI (C m)^2.
inline double dipole_sq_to_si(double debye2) {
    return debye2 * constants::debye * constants::debye;
}

} // namespace talbot

#endif
