#include "talbot/channels.hpp"

#include <cmath>

namespace talbot {

namespace {

constexpr int kMaxHarmonics = 512;

CollisionChannel collision_channel(const SimulationConfig& cfg, const ChannelOverrides& o) {
    CollisionChannel ch = *cfg.channels.collisional;
    if (o.pressure) ch.pressure = *o.pressure;
    if (o.sigma_eff) ch.gas.effective_cross_section = *o.sigma_eff;
    return ch;
}

ThermalChannel thermal_channel(const SimulationConfig& cfg, const ChannelOverrides& o) {
    ThermalChannel ch;
    ch.initial_temperature = o.entry_temperature
                                 ? *o.entry_temperature
                                 : cfg.channels.thermal->resolve_temperature();
    ch.time_steps = cfg.channels.thermal->time_steps;
    return ch;
}

} // namespace

VelocitySample beam_sample(const SimulationConfig& cfg, std::uint64_t seed) {
    return sample_velocities(cfg.beam, cfg.molecule,
                             static_cast<std::size_t>(cfg.numerics.velocity_samples), seed,
                             SamplingMode::quadrature);
}

double survival_factor(const SimulationConfig& cfg, const ChannelOverrides& o) {
    if (!cfg.channels.collisional) return 1.0;
    const CollisionChannel ch = collision_channel(cfg, o);
    return collision_kinematics(ch, cfg.molecule, cfg.beam.v0).survival;
}

std::vector<ChannelBuilder> channel_builders(const SimulationConfig& cfg,
                                             const ChannelOverrides& o) {
    std::vector<ChannelBuilder> builders;
    const MoleculeSpecies mol = cfg.molecule;
    const InterferometerConfig itf = cfg.interferometer;

    if (cfg.channels.collisional) {
        const CollisionChannel ch = collision_channel(cfg, o);
        builders.push_back([ch, mol](double v, int M) {
            return collisional_reduction(ch, mol, v, M).first;
        });
    }
    if (cfg.channels.thermal) {
        const ThermalChannel ch = thermal_channel(cfg, o);
        builders.push_back([ch, mol, itf](double v, int M) {
            return thermal_reduction(itf, mol, ch, v, M);
        });
    }
    if (cfg.channels.vibration) {
        const VibrationModel vib = *cfg.channels.vibration;
        const double d = itf.period();
        builders.push_back(
            [vib, d](double, int M) { return vibration_reduction(vib, d, M); });
    }
    if (cfg.channels.inertial == InertialMode::per_velocity) {
        builders.push_back(
            [itf](double v, int M) { return inertial_phase_factor(itf, v, M); });
    }
    if (cfg.channels.electric) {
        builders.push_back(
            [itf, mol](double v, int M) { return electric_reduction(itf, mol, v, M); });
    }
    if (cfg.channels.clock) {
        const ClockModel clock = *cfg.channels.clock;
        builders.push_back([clock](double, int M) { return clock_reduction(clock, M); });
    }
    return builders;
}

std::vector<ChannelReduction> lumped_reductions(const SimulationConfig& cfg,
                                                const VelocitySample& sample, int harmonics) {
    std::vector<ChannelReduction> post;
    if (cfg.channels.inertial == InertialMode::lumped)
        post.push_back(inertial_reduction(cfg.interferometer, sample, harmonics));
    return post;
}

PatternEvaluator::PatternEvaluator(const SimulationConfig& cfg, int harmonics)
    : cfg_(cfg), sample_(beam_sample(cfg)) {
    harmonics_ = harmonics > 0
                     ? harmonics
                     : (cfg.numerics.harmonics > 0 ? cfg.numerics.harmonics : 24);
    for (;;) {
        try {
            bare_.clear();
            bare_.reserve(sample_.size());
            for (double v : sample_.velocities)
                bare_.push_back(
                    fringe_coefficients(cfg_.interferometer, cfg_.molecule, v, {}, harmonics_));
            break;
        } catch (const TruncationError&) {
            if (harmonics_ >= kMaxHarmonics) throw;
            harmonics_ = std::min(2 * harmonics_, kMaxHarmonics);
        }
    }
}

FringePattern PatternEvaluator::bare_at(double v) const {
    return fringe_coefficients(cfg_.interferometer, cfg_.molecule, v, {}, harmonics_);
}

PatternResult PatternEvaluator::evaluate(const ChannelOverrides& o) const {
    const auto builders = channel_builders(cfg_, o);

    FringePattern avg;
    avg.period = cfg_.interferometer.period();
    avg.c.assign(static_cast<std::size_t>(harmonics_) + 1, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < sample_.size(); ++k) {
        FringePattern one = bare_[k];
        for (const auto& builder : builders)
            one.apply(builder(sample_.velocities[k], harmonics_));
        for (std::size_t m = 0; m < avg.c.size(); ++m)
            avg.c[m] += sample_.weights[k] * one.c[m];
    }
    for (const auto& r : lumped_reductions(cfg_, sample_, harmonics_)) avg.apply(r);

    return PatternResult{std::move(avg), survival_factor(cfg_, o)};
}

PatternResult PatternEvaluator::evaluate_at(double v, const ChannelOverrides& o) const {
    const auto builders = channel_builders(cfg_, o);
    FringePattern one = bare_at(v);
    for (const auto& builder : builders) one.apply(builder(v, harmonics_));
    return PatternResult{std::move(one), survival_factor(cfg_, o)};
}

PatternResult compute_pattern(const SimulationConfig& cfg, const ChannelOverrides& o,
                              int harmonics) {
    // The general path through velocity_averaged_pattern keeps the
    // double-counting guard between per-velocity and lumped channels active.
    int M = harmonics > 0 ? harmonics
                          : (cfg.numerics.harmonics > 0 ? cfg.numerics.harmonics : 24);
    const VelocitySample sample = beam_sample(cfg);
    const auto builders = channel_builders(cfg, o);
    for (;;) {
        try {
            FringePattern avg =
                velocity_averaged_pattern(cfg.interferometer, cfg.molecule, sample, builders, M,
                                          lumped_reductions(cfg, sample, M));
            return PatternResult{std::move(avg), survival_factor(cfg, o)};
        } catch (const TruncationError&) {
            if (M >= kMaxHarmonics) throw;
            M = std::min(2 * M, kMaxHarmonics);
        }
    }
}

} // namespace talbot
