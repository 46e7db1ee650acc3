#include "talbot/phase_averaging.hpp"

#include <cmath>

namespace talbot {

void VibrationModel::check() const {
    for (double s : sigma_x)
        if (s < 0.0) throw ConfigError("channels.vibration.sigma_x_nm: must be >= 0");
}

void ClockModel::check() const {
    if (mode_frequencies.empty())
        throw ConfigError("channels.clock.mode_frequencies_rad_s: must be non-empty");
    for (double w : mode_frequencies)
        if (!(w > 0.0))
            throw ConfigError("channels.clock.mode_frequencies_rad_s: must be > 0");
    if (height_separation < 0.0)
        throw ConfigError("channels.clock.height_separation_m: must be >= 0");
    if (evolution_time < 0.0)
        throw ConfigError("channels.clock.evolution_time_s: must be >= 0");
}

double inertial_phase(const InterferometerConfig& cfg, double v) {
    if (!(v > 0.0)) throw PhysicsError("inertial_phase: v must be > 0");
    const double k_eff = 2.0 * constants::pi / cfg.period();
    const double a = cfg.gravity_accel + 2.0 * v * cfg.rotation_rate;
    const double transit = cfg.separation / v;
    return k_eff * a * transit * transit;
}

double phase_spread(const InterferometerConfig& cfg, double v, double delta_v) {
    if (!(v > 0.0)) throw PhysicsError("phase_spread: v must be > 0");
    if (delta_v < 0.0) throw PhysicsError("phase_spread: delta_v must be >= 0");
    const double k_eff = 2.0 * constants::pi / cfg.period();
    const double transit = cfg.separation / v;
    const double phi_gravity = k_eff * cfg.gravity_accel * transit * transit;
    const double phi_coriolis = k_eff * 2.0 * v * cfg.rotation_rate * transit * transit;
    // phi_g ~ 1/v^2 spreads with slope 2, phi_c ~ 1/v with slope 1.
    return (2.0 * std::abs(phi_gravity) + std::abs(phi_coriolis)) * delta_v / v;
}

ChannelReduction inertial_phase_factor(const InterferometerConfig& cfg, double v,
                                       int harmonics) {
    const double phi = inertial_phase(cfg, v);
    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1);
    for (int m = 0; m <= harmonics; ++m)
        rm[static_cast<std::size_t>(m)] = std::polar(1.0, m * phi);
    return ChannelReduction::make("inertial", std::move(rm));
}

ChannelReduction inertial_reduction(const InterferometerConfig& cfg,
                                    const VelocitySample& sample, int harmonics) {
    if (sample.size() == 0)
        throw PhysicsError("inertial_reduction: empty velocity sample");
    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double phi = inertial_phase(cfg, sample.velocities[k]);
        for (int m = 0; m <= harmonics; ++m)
            rm[static_cast<std::size_t>(m)] +=
                sample.weights[k] * std::polar(1.0, m * phi);
    }
    rm[0] = cplx{1.0, 0.0};
    return ChannelReduction::make("inertial", std::move(rm));
}

ChannelReduction vibration_reduction(const VibrationModel& vib, double period, int harmonics) {
    vib.check();
    if (!(period > 0.0)) throw PhysicsError("vibration_reduction: period must be > 0");
    const double k_eff = 2.0 * constants::pi / period;
    const double var = k_eff * k_eff *
                       (vib.sigma_x[0] * vib.sigma_x[0] + 4.0 * vib.sigma_x[1] * vib.sigma_x[1] +
                        vib.sigma_x[2] * vib.sigma_x[2]);
    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1);
    for (int m = 0; m <= harmonics; ++m)
        rm[static_cast<std::size_t>(m)] = cplx{std::exp(-0.5 * m * m * var), 0.0};
    return ChannelReduction::make("vibration", std::move(rm));
}

double total_susceptibility(const MoleculeSpecies& mol) {
    double chi = mol.alpha_stat;
    if (mol.dipole_sq_mean > 0.0) {
        if (!(mol.internal_temperature > 0.0))
            throw PhysicsError(
                "total_susceptibility: fluctuating dipole requires internal_temperature > 0");
        chi += dipole_sq_to_si(mol.dipole_sq_mean) /
               (3.0 * constants::k_B * mol.internal_temperature);
    }
    return chi;
}

double electric_fringe_shift(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                             double v) {
    if (!(v > 0.0)) throw PhysicsError("electric_fringe_shift: v must be > 0");
    if (cfg.electric_field_term == 0.0) return 0.0;
    const double accel = total_susceptibility(mol) * cfg.electric_field_term / mol.mass;
    const double k_eff = 2.0 * constants::pi / cfg.period();
    const double transit = cfg.separation / v;
    return k_eff * accel * transit * transit;
}

ChannelReduction electric_reduction(const InterferometerConfig& cfg,
                                    const MoleculeSpecies& mol, double v, int harmonics) {
    const double phi = electric_fringe_shift(cfg, mol, v);
    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1);
    for (int m = 0; m <= harmonics; ++m)
        rm[static_cast<std::size_t>(m)] = std::polar(1.0, m * phi);
    return ChannelReduction::make("electric", std::move(rm));
}

double clock_dephasing(const ClockModel& clock) {
    clock.check();
    // Proper-time difference between the arms after the evolution time.
    const double dtau = constants::g_standard * clock.height_separation /
                        (constants::c * constants::c) * clock.evolution_time;
    double mult = 1.0;
    for (double w : clock.mode_frequencies) mult *= std::abs(std::cos(0.5 * w * dtau));
    return mult;
}

ChannelReduction clock_reduction(const ClockModel& clock, int harmonics) {
    const double mult = clock_dephasing(clock);
    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1, cplx{mult, 0.0});
    rm[0] = cplx{1.0, 0.0};
    return ChannelReduction::make("clock", std::move(rm));
}

double clock_coherence_time_ratio(double mass_ratio) {
    if (!(mass_ratio > 0.0))
        throw PhysicsError("clock_coherence_time_ratio: mass ratio must be > 0");
    return 1.0 / std::sqrt(mass_ratio);
}

} // namespace talbot
