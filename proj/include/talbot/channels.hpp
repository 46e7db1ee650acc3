#ifndef TALBOT_CHANNELS_HPP
#define TALBOT_CHANNELS_HPP

#include <optional>

#include "talbot/config.hpp"
#include "talbot/optics.hpp"

namespace talbot {

struct PatternResult {
    FringePattern pattern; // velocity averaged, un-normalized
    double survival = 1.0; // count-rate transmission from the collisional channel
};

/// Sweep-point overrides of the channel parameters from the config.
struct ChannelOverrides {
    std::optional<double> pressure;          // Pa
    std::optional<double> entry_temperature; // K
    std::optional<double> sigma_eff;         // m^2, collisional cross section
};

/// Quadrature velocity sample of the configured beam.
VelocitySample beam_sample(const SimulationConfig& cfg, std::uint64_t seed = 0);

double survival_factor(const SimulationConfig& cfg, const ChannelOverrides& o = {});

/// Builders for every enabled per-velocity channel (collisional, thermal,
/// vibration, electric, clock, and the inertial phase when
/// mode = per_velocity), honoring overrides.
std::vector<ChannelBuilder> channel_builders(const SimulationConfig& cfg,
                                             const ChannelOverrides& o = {});

/// Lumped factors applied once after velocity averaging (inertial channel in
/// lumped mode).
std::vector<ChannelReduction> lumped_reductions(const SimulationConfig& cfg,
                                                const VelocitySample& sample, int harmonics);

/// Caches the bare per-velocity optics so that repeated channel evaluations
/// (sweep points) cost only the channel factors. The harmonic count grows
/// until the truncation test passes at every sample velocity.
class PatternEvaluator {
public:
    explicit PatternEvaluator(const SimulationConfig& cfg, int harmonics = 0);

    PatternResult evaluate(const ChannelOverrides& o = {}) const;

    /// Monochromatic pattern at one velocity with all per-velocity channels.
    PatternResult evaluate_at(double v, const ChannelOverrides& o = {}) const;

    const VelocitySample& sample() const { return sample_; }
    int harmonics() const { return harmonics_; }

private:
    FringePattern bare_at(double v) const;

    SimulationConfig cfg_;
    VelocitySample sample_;
    int harmonics_ = 0;
    std::vector<FringePattern> bare_; // per sample velocity
};

/// One-shot convenience: full velocity-averaged pattern with all channels.
PatternResult compute_pattern(const SimulationConfig& cfg, const ChannelOverrides& o = {},
                              int harmonics = 0);

} // namespace talbot

#endif
