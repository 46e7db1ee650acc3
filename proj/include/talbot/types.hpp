#ifndef TALBOT_TYPES_HPP
#define TALBOT_TYPES_HPP

#include <array>
#include <string>

#include "talbot/constants.hpp"
#include "talbot/errors.hpp"

namespace talbot {

/// Everything the physics channels need to know about the interfering particle.
/// All quantities SI except dipole_sq_mean, which keeps the spectroscopic
/// Debye^2 convention of the configuration file.
struct MoleculeSpecies {
    std::string name;
    double mass = 0.0;                    // kg
    double alpha_stat = 0.0;              // C m^2 / V
    double dipole_sq_mean = 0.0;          // Debye^2, thermal <d.d>
    int n_atoms = 0;
    double internal_temperature = 0.0;    // K, at the source
    double einstein_temperature = 0.0;    // K, single-frequency vibrational model
    double absorption_cross_section = 0.0; // m^2, gray-body emissivity scale

    void check() const;
};

struct GasSpecies {
    double mass = 0.0;                 // kg
    double temperature = 0.0;          // K
    double effective_cross_section = 0.0; // m^2, vs the interfering molecule

    void check() const;
};

enum class GratingKind { material, optical_phase };

struct Grating {
    GratingKind kind = GratingKind::material;
    double period = 0.0;          // m
    double open_fraction = 1.0;   // (0,1], material only
    double thickness = 0.0;       // m, material only
    double c3 = 0.0;              // J m^3, Casimir-Polder coefficient, material only
    double c4 = 0.0;              // J m^4, accepted and stored, not used by the default profile
    double phase_amplitude = 0.0; // rad, optical only
    double wall_cutoff = 1e-9;    // m, molecules passing closer are treated as absorbed

    void check(const std::string& where) const;
};

struct InterferometerConfig {
    std::array<Grating, 3> gratings;
    double separation = 0.0;                  // m, equal G1-G2 and G2-G3 distance
    std::array<double, 3> grating_offsets{0.0, 0.0, 0.0}; // m, lateral positions x1,x2,x3
    double rotation_rate = 0.0;               // rad/s, Omega along the slit direction
    double gravity_accel = 0.0;               // m/s^2, component along the grating vector
    double electric_field_term = 0.0;         // V^2/m^3, (E.grad)E along the grating vector

    double period() const { return gratings[0].period; }
    void check() const;
};

struct BeamModel {
    double v0 = 0.0;                  // m/s, shift velocity
    double source_temperature = 0.0;  // K, longitudinal
    double v_min = 0.0;               // m/s
    double v_max = 0.0;               // m/s
    double collimation_half_angle = 1e-5; // rad

    void check() const;
};

} // namespace talbot

#endif
