#include "talbot/fresnel.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

namespace talbot {

namespace {

constexpr cplx I{0.0, 1.0};

std::mutex fftw_plan_mutex; // FFTW plan creation is not thread-safe

struct FftPair {
    int n;
    fftw_complex* buf;
    fftw_plan fwd;
    fftw_plan bwd;

    explicit FftPair(int n_) : n(n_) {
        buf = fftw_alloc_complex(static_cast<std::size_t>(n));
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf); }
};

/// Wraps u into [-d/2, d/2).
double wrap_period(double u, double d) {
    double w = std::fmod(u, d);
    if (w < -0.5 * d) w += d;
    if (w >= 0.5 * d) w -= d;
    return w;
}

/// Intensity transmission of one grating at position u relative to a slit
/// center. Material gratings: binary window, shrunk by the wall cutoff when
/// the Casimir-Polder phase makes grazing molecules stick. Optical phase
/// gratings transmit everything.
double intensity_transmission_at(const Grating& g, double u) {
    if (g.kind == GratingKind::optical_phase) return 1.0;
    const double cut = g.c3 > 0.0 ? g.wall_cutoff : 0.0;
    if (g.open_fraction == 1.0 && cut == 0.0) return 1.0; // no wall anywhere
    const double a = 0.5 * g.open_fraction * g.period - cut;
    return std::abs(wrap_period(u, g.period)) < a ? 1.0 : 0.0;
}

/// Complex amplitude transmission at position u, cell-averaged over `sub`
/// sub-samples of width `cell` to soften the binary edges on the grid.
cplx amplitude_transmission_cell(const Grating& g, const MoleculeSpecies& mol, double v,
                                 double u, double cell, int sub) {
    cplx acc{0.0, 0.0};
    for (int s = 0; s < sub; ++s) {
        const double x = u + cell * ((s + 0.5) / sub - 0.5);
        if (g.kind == GratingKind::optical_phase) {
            const double arg = std::cos(constants::pi * x / g.period);
            acc += std::exp(I * (g.phase_amplitude * arg * arg));
            continue;
        }
        const double cut = g.c3 > 0.0 ? g.wall_cutoff : 0.0;
        if (g.open_fraction == 1.0 && cut == 0.0) {
            acc += 1.0;
            continue;
        }
        const double w = wrap_period(x, g.period);
        const double a = 0.5 * g.open_fraction * g.period - cut;
        if (std::abs(w) >= a) continue;
        if (g.c3 > 0.0) {
            const double xi = w / (0.5 * g.open_fraction * g.period);
            acc += std::exp(I * slit_phase_profile(g, mol, v, xi));
        } else {
            acc += 1.0;
        }
    }
    return acc / static_cast<double>(sub);
}

int effective_max_order(const Grating& g) {
    if (g.kind == GratingKind::optical_phase)
        return static_cast<int>(std::ceil(g.phase_amplitude)) + 2;
    const double cut = g.c3 > 0.0 ? g.wall_cutoff : 0.0;
    const double f_eff = g.open_fraction - 2.0 * cut / g.period;
    return static_cast<int>(std::ceil(4.0 / std::max(f_eff, 1e-3)));
}

struct OracleField {
    std::vector<double> intensity; // summed over sources, grid units
    double source_flux = 0.0;      // sum of source weights
    double plane_flux = 0.0;       // total flux at the G3 plane
    int n = 0;
    double dx = 0.0;
};

OracleField propagate(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                      double lambda, const OracleGrid& grid, double v_for_phase) {
    cfg.check();
    grid.check();

    const double d = cfg.period();
    const double L = cfg.separation;
    const int n = grid.samples_per_period * grid.n_periods;
    const double window = d * grid.n_periods;
    const double dx = d / grid.samples_per_period;

    const int j_max = std::max(effective_max_order(cfg.gratings[1]),
                               std::max(effective_max_order(cfg.gratings[0]),
                                        effective_max_order(cfg.gratings[2])));
    if (static_cast<double>(j_max) * lambda * L / d > window) {
        std::ostringstream os;
        os << "fresnel_oracle: diffraction order " << j_max << " walks "
           << j_max * lambda * L / d << " m, beyond the " << window
           << " m grid window; increase --oracle-periods";
        throw NumericsError(os.str());
    }

    // Transfer function exp(-i pi lambda L f^2) on the FFT frequency layout.
    std::vector<cplx> transfer(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int kk = k < n / 2 ? k : k - n;
        const double f = kk / window;
        transfer[static_cast<std::size_t>(k)] =
            std::polar(1.0, -constants::pi * lambda * L * f * f);
    }

    // G2 amplitude transmission on the grid, 16-fold supersampled per cell.
    std::vector<cplx> t2(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const double x = m * dx;
        t2[static_cast<std::size_t>(m)] = amplitude_transmission_cell(
            cfg.gratings[1], mol, v_for_phase, x - cfg.grating_offsets[1], dx, 16);
    }

    FftPair fft(n);
    cplx* buf = fft.data();

    OracleField out;
    out.intensity.assign(static_cast<std::size_t>(n), 0.0);
    out.n = n;
    out.dx = dx;

    for (int p = 0; p < grid.n_source_points; ++p) {
        const double x0 = (p + 0.5) * d / grid.n_source_points;
        const double w0 =
            intensity_transmission_at(cfg.gratings[0], x0 - cfg.grating_offsets[0]);
        if (w0 == 0.0) continue;
        out.source_flux += w0;

        // Spectrum of the band-limited point source, already propagated by L.
        for (int k = 0; k < n; ++k) {
            const int kk = k < n / 2 ? k : k - n;
            const double f = kk / window;
            buf[k] = std::polar(1.0 / n, -2.0 * constants::pi * f * x0) *
                     transfer[static_cast<std::size_t>(k)];
        }
        fftw_execute(fft.bwd); // field at the G2 plane
        for (int m = 0; m < n; ++m) buf[m] *= t2[static_cast<std::size_t>(m)];
        fftw_execute(fft.fwd);
        const double inv_n = 1.0 / n;
        for (int k = 0; k < n; ++k) buf[k] *= transfer[static_cast<std::size_t>(k)] * inv_n;
        fftw_execute(fft.bwd); // field at the G3 plane

        for (int m = 0; m < n; ++m)
            out.intensity[static_cast<std::size_t>(m)] += w0 * std::norm(buf[m]);
    }

    for (double i : out.intensity) out.plane_flux += i;
    return out;
}

std::vector<double> detect(const OracleField& field, const InterferometerConfig& cfg,
                           const std::vector<double>& scan_offsets) {
    std::vector<double> flux(scan_offsets.size(), 0.0);
    for (std::size_t q = 0; q < scan_offsets.size(); ++q) {
        const double shift = cfg.grating_offsets[2] + scan_offsets[q];
        double acc = 0.0;
        for (int m = 0; m < field.n; ++m) {
            const double x = m * field.dx;
            acc += field.intensity[static_cast<std::size_t>(m)] *
                   intensity_transmission_at(cfg.gratings[2], x - shift);
        }
        flux[q] = acc;
    }
    return flux;
}

} // namespace

void OracleGrid::check() const {
    if (samples_per_period < 64)
        throw PhysicsError("oracle grid: samples_per_period must be >= 64");
    if (n_periods < 32) throw PhysicsError("oracle grid: n_periods must be >= 32");
    if (n_source_points < 64)
        throw PhysicsError("oracle grid: n_source_points must be >= 64");
}

std::vector<double> fresnel_oracle(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                                   double v, const OracleGrid& grid,
                                   const std::vector<double>& scan_offsets) {
    const double lambda = de_broglie_wavelength(mol, v);
    return detect(propagate(cfg, mol, lambda, grid, v), cfg, scan_offsets);
}

std::vector<double> fresnel_oracle_at_wavelength(const InterferometerConfig& cfg,
                                                 const MoleculeSpecies& mol, double lambda,
                                                 const OracleGrid& grid,
                                                 const std::vector<double>& scan_offsets) {
    if (!(lambda > 0.0)) throw PhysicsError("fresnel_oracle: wavelength must be > 0");
    // The slit phase still uses the physical velocity implied by lambda.
    const double v = constants::h / (mol.mass * lambda);
    return detect(propagate(cfg, mol, lambda, grid, v), cfg, scan_offsets);
}

FringePattern oracle_pattern(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                             double v, const OracleGrid& grid, int harmonics,
                             int scan_points) {
    const double d = cfg.period();
    std::vector<double> offsets(static_cast<std::size_t>(scan_points));
    for (int q = 0; q < scan_points; ++q)
        offsets[static_cast<std::size_t>(q)] = q * d / scan_points;
    const std::vector<double> flux = fresnel_oracle(cfg, mol, v, grid, offsets);

    FringePattern out;
    out.period = d;
    out.c.resize(static_cast<std::size_t>(harmonics) + 1);
    for (int m = 0; m <= harmonics; ++m) {
        cplx acc{0.0, 0.0};
        for (int q = 0; q < scan_points; ++q)
            acc += flux[static_cast<std::size_t>(q)] *
                   std::polar(1.0, -2.0 * constants::pi * m * q / scan_points);
        out.c[static_cast<std::size_t>(m)] = acc / static_cast<double>(scan_points);
    }
    if (!(out.c[0].real() > 0.0))
        throw PhysicsError("oracle_pattern: no detected flux");
    out.c[0] = cplx{out.c[0].real(), 0.0};
    return out;
}

double oracle_flux_ratio(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                         double v, const OracleGrid& grid) {
    const double lambda = de_broglie_wavelength(mol, v);
    const OracleField field = propagate(cfg, mol, lambda, grid, v);
    if (!(field.source_flux > 0.0))
        throw PhysicsError("oracle_flux_ratio: source grating fully closed");
    return field.plane_flux / field.source_flux;
}

} // namespace talbot
