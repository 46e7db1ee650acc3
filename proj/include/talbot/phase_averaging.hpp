#ifndef TALBOT_PHASE_AVERAGING_HPP
#define TALBOT_PHASE_AVERAGING_HPP

#include <array>
#include <vector>

#include "talbot/beam.hpp"
#include "talbot/optics.hpp"
#include "talbot/types.hpp"

namespace talbot {

/// Independent Gaussian position jitter of the three gratings.
struct VibrationModel {
    std::array<double, 3> sigma_x{0.0, 0.0, 0.0}; // m

    void check() const;
};

/// Internal vibrational clocks red-shifted across a height difference.
struct ClockModel {
    std::vector<double> mode_frequencies; // rad/s
    double height_separation = 0.0;       // m
    double evolution_time = 0.0;          // s

    void check() const;
};

/// Inertial fringe phase phi(v) = (2 pi / d) (g_par + 2 v Omega) (L / v)^2.
double inertial_phase(const InterferometerConfig& cfg, double v);

/// Linearized phase spread across a velocity band: 2 phi_gravity (dv/v) for
/// the 1/v^2 gravity term plus phi_coriolis (dv/v) for the 1/v Coriolis term,
/// summed in magnitude.
double phase_spread(const InterferometerConfig& cfg, double v, double delta_v);

/// Lumped inertial channel r_m = sum_k w_k exp(i m phi(v_k)). Only for runs
/// that do not already apply the inertial phase per velocity; the pattern
/// assembly guards against double counting by label.
ChannelReduction inertial_reduction(const InterferometerConfig& cfg,
                                    const VelocitySample& sample, int harmonics);

/// Per-velocity inertial phase factor r_m(v) = exp(i m phi(v)).
ChannelReduction inertial_phase_factor(const InterferometerConfig& cfg, double v,
                                       int harmonics);

/// r_m = exp(-m^2 sigma_phi^2 / 2) with
/// sigma_phi^2 = (2 pi / d)^2 (sigma_1^2 + 4 sigma_2^2 + sigma_3^2).
ChannelReduction vibration_reduction(const VibrationModel& vib, double period, int harmonics);

/// Scalar electric susceptibility chi_tot = alpha_stat + <d.d> / (3 k_B T), SI.
double total_susceptibility(const MoleculeSpecies& mol);

/// Fringe shift k_eff (chi_tot (E grad)E / mass) (L/v)^2 from a static field
/// gradient region spanning the interferometer.
double electric_fringe_shift(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                             double v);

ChannelReduction electric_reduction(const InterferometerConfig& cfg,
                                    const MoleculeSpecies& mol, double v, int harmonics);

/// Visibility multiplier prod_k |cos(omega_k (g dh / c^2) t / 2)| of the
/// independent two-level clocks.
double clock_dephasing(const ClockModel& clock);

ChannelReduction clock_reduction(const ClockModel& clock, int harmonics);

/// Required coherence-time scale factor when the particle mass grows by
/// mass_ratio at fixed beam-splitting: t2 / t1 = 1 / sqrt(mass_ratio).
double clock_coherence_time_ratio(double mass_ratio);

} // namespace talbot

#endif
