#include "talbot/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "talbot/numerics.hpp"

namespace talbot {

using numerics::gauss_legendre;

namespace {

constexpr cplx I{0.0, 1.0};

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

} // namespace

double GratingCoefficients::power_sum() const {
    double s = 0.0;
    for (const auto& v : b) s += std::norm(v);
    return s;
}

cplx FringePattern::coeff(int m) const {
    const int a = std::abs(m);
    if (a >= static_cast<int>(c.size())) return {0.0, 0.0};
    const cplx v = c[static_cast<std::size_t>(a)];
    return m < 0 ? std::conj(v) : v;
}

double FringePattern::visibility() const {
    if (c.empty() || !(c[0].real() > 0.0))
        throw PhysicsError("fringe pattern has no positive mean component");
    if (c.size() < 2) return 0.0;
    return 2.0 * std::abs(c[1]) / c[0].real();
}

double FringePattern::phase() const {
    if (c.size() < 2) return 0.0;
    return std::arg(c[1]);
}

double FringePattern::value_at(double offset) const {
    double s = c.empty() ? 0.0 : c[0].real();
    for (int m = 1; m <= harmonics(); ++m) {
        const cplx w = std::polar(1.0, 2.0 * constants::pi * m * offset / period);
        s += 2.0 * std::real(c[static_cast<std::size_t>(m)] * w);
    }
    return s;
}

FringePattern FringePattern::normalized() const {
    if (c.empty() || !(c[0].real() > 0.0))
        throw PhysicsError("cannot normalize a pattern with non-positive c_0");
    FringePattern out = *this;
    const double c0 = c[0].real();
    for (auto& v : out.c) v /= c0;
    return out;
}

void FringePattern::apply(const ChannelReduction& r) {
    for (int m = 1; m <= harmonics(); ++m)
        c[static_cast<std::size_t>(m)] *= r.coeff(m);
}

cplx ChannelReduction::coeff(int m) const {
    const int a = std::abs(m);
    if (a >= static_cast<int>(r.size())) return {1.0, 0.0};
    const cplx v = r[static_cast<std::size_t>(a)];
    return m < 0 ? std::conj(v) : v;
}

ChannelReduction ChannelReduction::make(std::string label, std::vector<cplx> r) {
    if (r.empty() || std::abs(r[0] - cplx{1.0, 0.0}) > 1e-12)
        throw PhysicsError("channel '" + label + "': r_0 must be 1");
    for (const auto& v : r)
        if (std::abs(v) > 1.0 + 1e-9)
            throw PhysicsError("channel '" + label + "': |r_m| exceeds 1");
    ChannelReduction out;
    out.label = std::move(label);
    out.r = std::move(r);
    return out;
}

double slit_phase_profile(const Grating& g, const MoleculeSpecies& mol, double v, double xi) {
    (void)mol;
    if (g.kind != GratingKind::material)
        throw PhysicsError("slit_phase_profile: material grating required");
    if (!(v > 0.0)) throw PhysicsError("slit_phase_profile: v must be > 0");
    if (!(std::abs(xi) < 1.0))
        throw PhysicsError("slit_phase_profile: |xi| must be < 1 (wall distance zero)");
    if (g.c3 == 0.0) return 0.0;
    const double half_width = 0.5 * g.open_fraction * g.period;
    const double r_left = (1.0 + xi) * half_width;
    const double r_right = (1.0 - xi) * half_width;
    const double inv3 = 1.0 / (r_left * r_left * r_left) + 1.0 / (r_right * r_right * r_right);
    return g.c3 * g.thickness / (constants::hbar * v) * inv3;
}

GratingCoefficients material_grating_coefficients(const Grating& g, const MoleculeSpecies& mol,
                                                  double v, int truncation) {
    if (g.kind != GratingKind::material)
        throw PhysicsError("material_grating_coefficients: material grating required");
    if (truncation < 8)
        throw PhysicsError("material_grating_coefficients: truncation must be >= 8");

    const double d = g.period;
    const double slit_half = 0.5 * g.open_fraction * d;
    // Molecules grazing the walls are treated as absorbed: closer than the
    // configured cutoff, or where the accumulated phase exceeds kPhaseCap.
    // Beyond the cap the integrand oscillates faster than any fixed grating
    // order and contributes only scattering into untracked orders.
    constexpr double kPhaseCap = 1.28e3; // rad, per wall
    double cut = g.c3 > 0.0 ? g.wall_cutoff : 0.0;
    if (g.c3 > 0.0) {
        const double r_cap =
            std::cbrt(g.c3 * g.thickness / (constants::hbar * v * kPhaseCap));
        cut = std::max(cut, r_cap);
    }
    const double a = slit_half - cut;
    if (!(a > 0.0))
        throw PhysicsError("material grating: wall cutoff closes the slit entirely");

    const int J = truncation;
    const std::size_t n_coeffs = static_cast<std::size_t>(2 * J + 1);

    // Composite Gauss-Legendre panels sized so that neither the slit phase
    // nor the fastest Fourier factor advances by more than ~pi/2 per panel.
    // Near a wall the panel edges follow equal phase increments of the 1/r^3
    // profile; density = 2 halves every panel width.
    const double cp_scale = g.c3 * g.thickness / (constants::hbar * v); // K: phi = K / r^3
    auto integrate = [&](double density) {
        std::vector<cplx> out(n_coeffs, cplx{0.0, 0.0});
        const auto& rule = gauss_legendre(12);
        const double dphi = 0.5 * constants::pi / density;
        const double j_width = dphi * d / (2.0 * constants::pi * J);
        double x0 = -a;
        while (x0 < a) {
            double width = std::min(j_width, a - x0);
            if (g.c3 > 0.0) {
                // Left wall: gradient is largest at the panel start.
                const double r_left = slit_half + x0;
                const double grad_left = 3.0 * cp_scale / (r_left * r_left * r_left * r_left);
                width = std::min(width, dphi / grad_left);
                // Right wall: advance to the next equal-phase contour.
                const double r_right = slit_half - x0;
                const double phi_right = cp_scale / (r_right * r_right * r_right);
                const double r_next = std::cbrt(cp_scale / (phi_right + dphi));
                width = std::min(width, r_right - r_next);
            }
            width = std::min(width, a - x0);
            const double mid = x0 + 0.5 * width;
            const double half = 0.5 * width;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double x = mid + half * rule.nodes[k];
                const double w = half * rule.weights[k] / d;
                const double phase =
                    g.c3 > 0.0 ? slit_phase_profile(g, mol, v, x / slit_half) : 0.0;
                const cplx f = w * std::exp(I * phase);
                // exp(-2 pi i j x / d) advanced multiplicatively across j.
                const cplx step = std::polar(1.0, -2.0 * constants::pi * x / d);
                cplx rot = std::polar(1.0, 2.0 * constants::pi * x / d * J); // j = -J
                for (std::size_t idx = 0; idx < n_coeffs; ++idx) {
                    out[idx] += f * rot;
                    rot *= step;
                }
            }
            x0 += width;
        }
        return out;
    };

    double density = 0.25;
    std::vector<cplx> prev = integrate(density);
    for (;;) {
        density *= 2.0;
        if (density > 64.0)
            throw NumericsError("material_grating_coefficients: quadrature did not converge");
        std::vector<cplx> cur = integrate(density);
        double diff = 0.0;
        for (std::size_t idx = 0; idx < n_coeffs; ++idx)
            diff = std::max(diff, std::abs(cur[idx] - prev[idx]));
        prev = std::move(cur);
        if (diff <= 1e-8) break;
    }

    GratingCoefficients out;
    out.truncation = J;
    out.b = std::move(prev);
    return out;
}

GratingCoefficients optical_grating_coefficients(const Grating& g, int truncation) {
    if (g.kind != GratingKind::optical_phase)
        throw PhysicsError("optical_grating_coefficients: optical grating required");
    if (static_cast<double>(truncation) < g.phase_amplitude) {
        std::ostringstream os;
        os << "optical_grating_coefficients: truncation " << truncation
           << " below phase amplitude " << g.phase_amplitude
           << "; coefficients have not decayed, increase the truncation";
        throw TruncationError(os.str());
    }
    const int J = truncation;
    const double z = 0.5 * g.phase_amplitude;
    const cplx front = std::exp(I * z);
    GratingCoefficients out;
    out.truncation = J;
    out.b.assign(static_cast<std::size_t>(2 * J + 1), cplx{0.0, 0.0});
    for (int j = -J; j <= J; ++j) {
        const int aj = std::abs(j);
        double bessel = std::cyl_bessel_j(static_cast<double>(aj), z);
        if (j < 0 && (aj % 2) == 1) bessel = -bessel;
        // i^j
        cplx ipow;
        switch (((j % 4) + 4) % 4) {
            case 0: ipow = {1.0, 0.0}; break;
            case 1: ipow = {0.0, 1.0}; break;
            case 2: ipow = {-1.0, 0.0}; break;
            default: ipow = {0.0, -1.0}; break;
        }
        out.b[static_cast<std::size_t>(j + J)] = front * ipow * bessel;
    }
    return out;
}

GratingCoefficients grating_coefficients(const Grating& g, const MoleculeSpecies& mol,
                                         double v, int truncation) {
    return g.kind == GratingKind::material
               ? material_grating_coefficients(g, mol, v, truncation)
               : optical_grating_coefficients(g, truncation);
}

std::vector<double> intensity_coefficients(const Grating& g, int max_harmonic) {
    std::vector<double> out(static_cast<std::size_t>(max_harmonic) + 1, 0.0);
    if (g.kind == GratingKind::optical_phase) {
        out[0] = 1.0;
        return out;
    }
    const double cut = g.c3 > 0.0 ? g.wall_cutoff : 0.0;
    const double f_eff = g.open_fraction - 2.0 * cut / g.period;
    if (!(f_eff > 0.0))
        throw PhysicsError("material grating: wall cutoff closes the slit entirely");
    for (int m = 0; m <= max_harmonic; ++m)
        out[static_cast<std::size_t>(m)] = f_eff * sinc(constants::pi * m * f_eff);
    return out;
}

cplx talbot_coefficient(const GratingCoefficients& b, int mu, double xi) {
    const int J = b.truncation;
    cplx sum{0.0, 0.0};
    // j and j-mu must both lie inside the truncation window.
    const int j_lo = std::max(-J, -J + mu);
    const int j_hi = std::min(J, J + mu);
    if (j_lo > j_hi) return sum;
    const cplx step = std::polar(1.0, -2.0 * constants::pi * xi);
    cplx rot = std::polar(1.0, constants::pi * (mu - 2 * j_lo) * xi);
    for (int j = j_lo; j <= j_hi; ++j) {
        sum += b.coeff(j) * std::conj(b.coeff(j - mu)) * rot;
        rot *= step;
    }
    return sum;
}

double talbot_length(double period, double lambda_db) {
    if (!(period > 0.0 && lambda_db > 0.0))
        throw PhysicsError("talbot_length: period and wavelength must be > 0");
    return period * period / lambda_db;
}

FringePattern fringe_coefficients(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                                  double v, const std::vector<ChannelReduction>& reductions,
                                  int harmonics, double tail_tol) {
    cfg.check();
    if (harmonics < 1) throw PhysicsError("fringe_coefficients: harmonics must be >= 1");

    const double d = cfg.period();
    const double lambda = de_broglie_wavelength(mol, v);
    const double xi = cfg.separation / talbot_length(d, lambda);

    int J = std::max(8, 4 * harmonics);
    if (cfg.gratings[1].kind == GratingKind::optical_phase)
        J = std::max(J, static_cast<int>(std::ceil(cfg.gratings[1].phase_amplitude)) + 8);

    const auto a1 = intensity_coefficients(cfg.gratings[0], harmonics);
    const auto a3 = intensity_coefficients(cfg.gratings[2], harmonics);
    const auto b2 = grating_coefficients(cfg.gratings[1], mol, v, J);

    const double dphi_geo = (cfg.grating_offsets[0] - 2.0 * cfg.grating_offsets[1] +
                             cfg.grating_offsets[2]) *
                            2.0 * constants::pi / d;

    FringePattern out;
    out.period = d;
    out.c.resize(static_cast<std::size_t>(harmonics) + 1);
    for (int m = 0; m <= harmonics; ++m) {
        const cplx B = talbot_coefficient(b2, 2 * m, m * xi);
        cplx cm = a1[static_cast<std::size_t>(m)] * B * a3[static_cast<std::size_t>(m)] *
                  std::polar(1.0, m * dphi_geo);
        out.c[static_cast<std::size_t>(m)] = cm;
    }
    if (!(out.c[0].real() > 0.0))
        throw PhysicsError("fringe_coefficients: mean transmission is not positive");
    out.c[0] = cplx{out.c[0].real(), 0.0};

    // Truncation check on the bare optics coefficients: channel multipliers
    // can only shrink the tail faster than the leading harmonics. The
    // reference is the strongest fringe harmonic, which coincides with |c_1|
    // away from visibility nulls.
    const double tail = std::abs(out.c[static_cast<std::size_t>(harmonics)]);
    double lead = 0.0;
    for (int m = 1; m <= harmonics; ++m)
        lead = std::max(lead, std::abs(out.c[static_cast<std::size_t>(m)]));
    if (tail > tail_tol * lead && tail > 1e-6 * out.c[0].real()) {
        std::ostringstream os;
        os << "fringe_coefficients: harmonic tail |c_" << harmonics << "|/|c_lead| = "
           << (lead > 0.0 ? tail / lead : std::numeric_limits<double>::infinity())
           << " exceeds " << tail_tol << "; increase the harmonic count";
        throw TruncationError(os.str());
    }

    for (const auto& r : reductions) out.apply(r);
    return out;
}

FringePattern velocity_averaged_pattern(const InterferometerConfig& cfg,
                                        const MoleculeSpecies& mol,
                                        const VelocitySample& sample,
                                        const std::vector<ChannelBuilder>& builders,
                                        int harmonics,
                                        const std::vector<ChannelReduction>& post,
                                        double tail_tol) {
    if (sample.size() == 0)
        throw PhysicsError("velocity_averaged_pattern: empty velocity sample");

    FringePattern avg;
    avg.period = cfg.period();
    avg.c.assign(static_cast<std::size_t>(harmonics) + 1, cplx{0.0, 0.0});

    std::set<std::string> builder_labels;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double v = sample.velocities[k];
        std::vector<ChannelReduction> reductions;
        reductions.reserve(builders.size());
        for (const auto& builder : builders) {
            reductions.push_back(builder(v, harmonics));
            builder_labels.insert(reductions.back().label);
        }
        const FringePattern one = fringe_coefficients(cfg, mol, v, reductions,
                                                      harmonics, tail_tol);
        for (std::size_t m = 0; m < avg.c.size(); ++m)
            avg.c[m] += sample.weights[k] * one.c[m];
    }

    for (const auto& r : post) {
        if (builder_labels.count(r.label))
            throw PhysicsError("channel '" + r.label +
                               "' applied both per velocity and lumped (double counting)");
        avg.apply(r);
    }
    return avg;
}

} // namespace talbot
