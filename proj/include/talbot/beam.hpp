#ifndef TALBOT_BEAM_HPP
#define TALBOT_BEAM_HPP

#include <cstdint>
#include <vector>

#include "talbot/types.hpp"

namespace talbot {

/// Discretized longitudinal velocity distribution. Weights are normalized to
/// sum to one; immutable once built.
struct VelocitySample {
    std::vector<double> velocities; // m/s
    std::vector<double> weights;    // dimensionless, sum = 1
    std::uint64_t seed = 0;

    std::size_t size() const { return velocities.size(); }
    double mean() const;
};

enum class SamplingMode { quadrature, monte_carlo };

/// Shifted Maxwell-Boltzmann density f(v) ~ v^2 exp[-m (v-v0)^2 / 2 k_B T],
/// truncated and normalized on [v_min, v_max].
class VelocityDistribution {
public:
    VelocityDistribution(const BeamModel& beam, const MoleculeSpecies& mol);

    double pdf(double v) const;          // normalized density, 1/(m/s)
    double unnormalized(double v) const; // window-truncated shape
    double mean() const;                 // Int v f(v) dv over the window
    double v_min() const { return v_min_; }
    double v_max() const { return v_max_; }

private:
    double mass_;
    double v0_;
    double temperature_;
    double v_min_;
    double v_max_;
    double norm_;
};

double velocity_pdf(double v, const BeamModel& beam, const MoleculeSpecies& mol);

VelocitySample sample_velocities(const BeamModel& beam, const MoleculeSpecies& mol,
                                 std::size_t n, std::uint64_t seed,
                                 SamplingMode mode = SamplingMode::quadrature);

/// 1-sigma width of the Gaussian factor of the source distribution.
double thermal_velocity_sigma(const BeamModel& beam, const MoleculeSpecies& mol);

/// Fills v_min/v_max with the default window [v0 - 4 sigma, v0 + 4 sigma],
/// clipped to stay positive.
void apply_default_window(BeamModel& beam, const MoleculeSpecies& mol);

double de_broglie_wavelength(const MoleculeSpecies& mol, double v);

double coherence_length(double lambda_db, double v, double delta_v);

bool order_observable(double lambda_db, double coherence_length, int n);

double transverse_temperature(const MoleculeSpecies& mol, double v, double half_angle);

} // namespace talbot

#endif
