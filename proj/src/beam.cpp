#include "talbot/beam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "talbot/numerics.hpp"

namespace talbot {

using numerics::adaptive_simpson;
using numerics::gauss_legendre;

double VelocitySample::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < velocities.size(); ++i) m += weights[i] * velocities[i];
    return m;
}

VelocityDistribution::VelocityDistribution(const BeamModel& beam, const MoleculeSpecies& mol)
    : mass_(mol.mass),
      v0_(beam.v0),
      temperature_(beam.source_temperature),
      v_min_(beam.v_min),
      v_max_(beam.v_max) {
    if (!(v_min_ >= 0.0 && v_min_ < v_max_))
        throw PhysicsError("velocity window requires 0 <= v_min < v_max");
    if (!(temperature_ > 0.0))
        throw PhysicsError("velocity distribution requires source_temperature > 0");
    norm_ = adaptive_simpson([this](double v) { return unnormalized(v); },
                             v_min_, v_max_, 1e-10);
    if (!(norm_ > 0.0))
        throw PhysicsError("velocity distribution has zero weight in the window");
}

double VelocityDistribution::unnormalized(double v) const {
    if (v < v_min_ || v > v_max_) return 0.0;
    const double u = v - v0_;
    return v * v * std::exp(-mass_ * u * u / (2.0 * constants::k_B * temperature_));
}

double VelocityDistribution::pdf(double v) const { return unnormalized(v) / norm_; }

double VelocityDistribution::mean() const {
    return adaptive_simpson([this](double v) { return v * pdf(v); }, v_min_, v_max_, 1e-10);
}

double velocity_pdf(double v, const BeamModel& beam, const MoleculeSpecies& mol) {
    if (v < 0.0) throw PhysicsError("velocity_pdf: v must be >= 0");
    return VelocityDistribution(beam, mol).pdf(v);
}

double thermal_velocity_sigma(const BeamModel& beam, const MoleculeSpecies& mol) {
    return std::sqrt(constants::k_B * beam.source_temperature / mol.mass);
}

void apply_default_window(BeamModel& beam, const MoleculeSpecies& mol) {
    const double sigma = thermal_velocity_sigma(beam, mol);
    beam.v_min = std::max(1e-3 * sigma, beam.v0 - 4.0 * sigma);
    beam.v_max = beam.v0 + 4.0 * sigma;
}

VelocitySample sample_velocities(const BeamModel& beam, const MoleculeSpecies& mol,
                                 std::size_t n, std::uint64_t seed, SamplingMode mode) {
    if (n == 0) throw PhysicsError("sample_velocities: n must be >= 1");
    VelocityDistribution dist(beam, mol);

    VelocitySample sample;
    sample.seed = seed;
    sample.velocities.reserve(n);
    sample.weights.reserve(n);

    if (mode == SamplingMode::quadrature) {
        const auto& rule = gauss_legendre(static_cast<int>(n));
        const double mid = 0.5 * (beam.v_max + beam.v_min);
        const double half = 0.5 * (beam.v_max - beam.v_min);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = mid + half * rule.nodes[i];
            const double w = dist.pdf(v) * rule.weights[i] * half;
            sample.velocities.push_back(v);
            sample.weights.push_back(w);
            total += w;
        }
        for (auto& w : sample.weights) w /= total;
        return sample;
    }

    // Monte Carlo: inverse CDF on a dense trapezoid grid, equal weights.
    constexpr std::size_t grid_n = 4096;
    std::vector<double> vgrid(grid_n + 1), cdf(grid_n + 1);
    const double dv = (beam.v_max - beam.v_min) / grid_n;
    vgrid[0] = beam.v_min;
    cdf[0] = 0.0;
    double prev = dist.pdf(beam.v_min);
    for (std::size_t i = 1; i <= grid_n; ++i) {
        vgrid[i] = beam.v_min + dv * static_cast<double>(i);
        const double cur = dist.pdf(vgrid[i]);
        cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * dv;
        prev = cur;
    }
    const double total = cdf[grid_n];
    for (auto& c : cdf) c /= total;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uni(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t hi = std::min<std::size_t>(
            static_cast<std::size_t>(std::distance(cdf.begin(), it)), grid_n);
        if (hi == 0) hi = 1;
        const double c0 = cdf[hi - 1], c1 = cdf[hi];
        const double t = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
        sample.velocities.push_back(vgrid[hi - 1] + t * dv);
        sample.weights.push_back(1.0 / static_cast<double>(n));
    }
    return sample;
}

double de_broglie_wavelength(const MoleculeSpecies& mol, double v) {
    if (!(v > 0.0)) throw PhysicsError("de_broglie_wavelength: v must be > 0");
    return constants::h / (mol.mass * v);
}

double coherence_length(double lambda_db, double v, double delta_v) {
    if (!(delta_v > 0.0)) throw PhysicsError("coherence_length: delta_v must be > 0");
    return lambda_db * v / delta_v;
}

bool order_observable(double lambda_db, double coherence_length, int n) {
    if (n < 1) throw PhysicsError("order_observable: n must be >= 1");
    return coherence_length >= static_cast<double>(n) * lambda_db;
}

double transverse_temperature(const MoleculeSpecies& mol, double v, double half_angle) {
    if (!(half_angle > 0.0 && half_angle < constants::pi / 2))
        throw PhysicsError("transverse_temperature: half_angle must be in (0, pi/2)");
    const double vt = v * std::sin(half_angle);
    return mol.mass * vt * vt / (2.0 * constants::k_B);
}

} // namespace talbot
