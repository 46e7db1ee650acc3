#include "talbot/types.hpp"

#include <cmath>
#include <sstream>

namespace talbot {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

} // namespace

void MoleculeSpecies::check() const {
    if (!(mass > 0.0)) fail("molecule.mass", "must be > 0");
    if (alpha_stat < 0.0) fail("molecule.alpha_stat", "must be >= 0");
    if (dipole_sq_mean < 0.0) fail("molecule.dipole_sq_debye2", "must be >= 0");
    if (n_atoms < 2) fail("molecule.n_atoms", "must be >= 2");
    if (internal_temperature < 0.0) fail("molecule.internal_temperature_K", "must be >= 0");
    if (einstein_temperature < 0.0) fail("molecule.einstein_temperature_K", "must be >= 0");
    if (absorption_cross_section < 0.0) fail("channels.thermal.sigma_abs_nm2", "must be >= 0");
}

void GasSpecies::check() const {
    if (!(mass > 0.0)) fail("gas.mass_da", "must be > 0");
    if (!(temperature > 0.0)) fail("gas.temperature_K", "must be > 0");
    if (!(effective_cross_section > 0.0)) fail("channels.collisional.sigma_eff_nm2", "must be > 0");
}

void Grating::check(const std::string& where) const {
    if (!(period > 0.0)) fail(where + ".period", "must be > 0");
    if (kind == GratingKind::material) {
        if (!(open_fraction > 0.0 && open_fraction <= 1.0))
            fail(where + ".open_fraction", "out of (0,1]");
        if (thickness < 0.0) fail(where + ".thickness_nm", "must be >= 0");
        if (c3 < 0.0) fail(where + ".c3_J_m3", "must be >= 0");
        if (c4 < 0.0) fail(where + ".c4_J_m4", "must be >= 0");
        if (wall_cutoff < 0.0) fail(where + ".wall_cutoff_nm", "must be >= 0");
        if (c3 > 0.0 && !(thickness > 0.0))
            fail(where + ".thickness_nm", "must be > 0 when c3 > 0");
    } else {
        if (phase_amplitude < 0.0) fail(where + ".phase_amplitude_rad", "must be >= 0");
    }
}

void InterferometerConfig::check() const {
    for (int i = 0; i < 3; ++i) {
        std::ostringstream w;
        w << "interferometer.g" << (i + 1);
        gratings[static_cast<std::size_t>(i)].check(w.str());
    }
    if (!(separation > 0.0)) fail("interferometer.separation_mm", "must be > 0");
    const double d = gratings[0].period;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(gratings[static_cast<std::size_t>(i)].period - d) > 1e-15 * d)
            fail("interferometer", "all three grating periods must be equal "
                                   "(only the symmetric same-period geometry is modeled)");
    }
}

void BeamModel::check() const {
    if (!(source_temperature > 0.0)) fail("beam.source_temperature_K", "must be > 0");
    if (v0 < 0.0) fail("beam.v0_m_per_s", "must be >= 0");
    if (!(v_min >= 0.0 && v_min < v_max))
        fail("beam", "velocity window requires 0 <= v_min < v_max");
    if (!(collimation_half_angle > 0.0 && collimation_half_angle < constants::pi / 2))
        fail("beam.collimation_half_angle_rad", "must be in (0, pi/2)");
}

} // namespace talbot
