#include "talbot/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>

#include "talbot/numerics.hpp"

namespace talbot {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 invert_3x3(const Mat3& a, double scale) {
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if (!(std::abs(det) > 1e-12 * scale))
        throw PhysicsError("fit_fringe: degenerate offsets (rank-deficient design)");
    const double inv = 1.0 / det;
    Mat3 r;
    r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * inv;
    r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv;
    r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv;
    r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * inv;
    r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv;
    r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv;
    r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * inv;
    r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv;
    r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv;
    return r;
}

} // namespace

double FringeFit::visibility_sigma() const {
    // Delta method on V = sqrt(a1^2 + a2^2) / a0 with the stored covariance;
    // the parameters are recovered from (visibility, phase, mean N0) implied
    // by the covariance basis.
    const double n0 = mean_rate_n0;
    const double a1 = n0 * visibility * std::cos(phase);
    const double a2 = n0 * visibility * std::sin(phase);
    const double r = std::hypot(a1, a2);
    std::array<double, 3> g;
    if (r > 0.0) {
        g = {-r / (n0 * n0), a1 / (r * n0), a2 / (r * n0)};
    } else {
        g = {0.0, 1.0 / n0, 1.0 / n0};
    }
    double var = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            var += g[static_cast<std::size_t>(i)] * covariance[static_cast<std::size_t>(i)]
                                                              [static_cast<std::size_t>(j)] *
                   g[static_cast<std::size_t>(j)];
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

ScanResult simulate_scan(const FringePattern& pattern, const std::vector<double>& offsets,
                         double flux, double integration_time, double survival,
                         std::uint64_t seed) {
    if (!(flux > 0.0)) throw PhysicsError("simulate_scan: flux must be > 0");
    if (!(integration_time > 0.0))
        throw PhysicsError("simulate_scan: integration_time must be > 0");
    if (!(survival >= 0.0 && survival <= 1.0))
        throw PhysicsError("simulate_scan: survival must be in [0, 1]");
    if (pattern.c.empty() || std::abs(pattern.c[0].real() - 1.0) > 1e-9)
        throw PhysicsError("simulate_scan: pattern must be normalized (c_0 = 1)");

    ScanResult out;
    out.offsets = offsets;
    out.integration_time = integration_time;
    out.true_pattern = pattern;
    out.counts.reserve(offsets.size());

    std::mt19937_64 rng(seed);
    const double mean = flux * survival * integration_time;
    for (double x : offsets) {
        double expected = mean * pattern.value_at(x);
        if (expected < -1e-9 * mean)
            throw PhysicsError("simulate_scan: negative expected rate (unphysical pattern)");
        expected = std::max(expected, 0.0);
        std::poisson_distribution<long long> poisson(expected);
        out.counts.push_back(expected > 0.0 ? poisson(rng) : 0);
    }
    return out;
}

FringeFit fit_fringe(const ScanResult& scan, double period) {
    const std::size_t n = scan.offsets.size();
    if (n < 8 || scan.counts.size() != n)
        throw PhysicsError("fit_fringe: need at least 8 points");
    // n uniform points over [0, d) span d (n-1)/n; that still covers a full
    // period once the wrap-around spacing is counted.
    const auto [lo, hi] = std::minmax_element(scan.offsets.begin(), scan.offsets.end());
    const double span = *hi - *lo;
    const double required =
        period * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
    if (!(span >= required * (1.0 - 1e-12)))
        throw PhysicsError("fit_fringe: offsets must span at least one period");

    Mat3 ata{};
    std::array<double, 3> aty{};
    double wyy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<double>(scan.counts[i]);
        const double w = 1.0 / std::max(y, 1.0);
        const double arg = 2.0 * constants::pi * scan.offsets[i] / period;
        const std::array<double, 3> row{1.0, std::sin(arg), std::cos(arg)};
        for (int a = 0; a < 3; ++a) {
            const auto ia = static_cast<std::size_t>(a);
            aty[ia] += w * row[ia] * y;
            for (int b = 0; b < 3; ++b)
                ata[ia][static_cast<std::size_t>(b)] +=
                    w * row[ia] * row[static_cast<std::size_t>(b)];
        }
        wyy += w;
    }
    const Mat3 cov = invert_3x3(ata, std::pow(wyy / 3.0, 3));

    std::array<double, 3> theta{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            theta[static_cast<std::size_t>(a)] +=
                cov[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                aty[static_cast<std::size_t>(b)];

    const double n0 = theta[0];
    if (!(n0 > 0.0)) throw PhysicsError("fit_fringe: non-positive mean level");

    FringeFit fit;
    fit.visibility = std::hypot(theta[1], theta[2]) / n0;
    fit.phase = std::atan2(theta[2], theta[1]);
    fit.mean_rate = n0 / scan.integration_time;
    fit.mean_rate_n0 = n0;
    fit.covariance = cov;

    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<double>(scan.counts[i]);
        const double w = 1.0 / std::max(y, 1.0);
        const double arg = 2.0 * constants::pi * scan.offsets[i] / period;
        const double model = theta[0] + theta[1] * std::sin(arg) + theta[2] * std::cos(arg);
        chi2 += w * (y - model) * (y - model);
    }
    fit.chi2_reduced = chi2 / static_cast<double>(n - 3);
    return fit;
}

SweepKind sweep_kind_from_name(const std::string& name) {
    if (name == "pressure") return SweepKind::pressure;
    if (name == "heating") return SweepKind::heating;
    if (name == "coriolis_map") return SweepKind::coriolis_map;
    if (name == "velocity_spread") return SweepKind::velocity_spread;
    throw ConfigError("unknown sweep kind '" + name +
                      "' (expected pressure, heating, coriolis_map or velocity_spread)");
}

std::string sweep_grid_column(SweepKind kind) {
    switch (kind) {
        case SweepKind::pressure: return "pressure_mbar";
        case SweepKind::heating: return "power_W";
        case SweepKind::coriolis_map: return "velocity_m_per_s";
        case SweepKind::velocity_spread: return "delta_v_over_v";
    }
    return "grid";
}

std::vector<SweepRow> run_sweep(SweepKind kind, const SimulationConfig& cfg,
                                const std::vector<double>& grid) {
    if (grid.empty()) throw PhysicsError("run_sweep: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw PhysicsError("run_sweep: grid must be sorted ascending");

    std::vector<SweepRow> rows(grid.size());
    const double flux = cfg.scan.flux;

    auto fill = [&](std::size_t i, const PatternResult& res) {
        rows[i].grid = grid[i];
        rows[i].visibility = res.pattern.visibility();
        rows[i].phase = res.pattern.phase();
        rows[i].rate = flux * res.survival;
    };

    switch (kind) {
        case SweepKind::pressure: {
            if (!cfg.channels.collisional)
                throw ConfigError("pressure sweep requires [channels.collisional]");
            const PatternEvaluator eval(cfg);
            numerics::parallel_for(grid.size(), [&](std::size_t i) {
                ChannelOverrides o;
                o.pressure = grid[i] * 100.0; // mbar -> Pa
                fill(i, eval.evaluate(o));
            });
            break;
        }
        case SweepKind::heating: {
            if (!cfg.channels.thermal)
                throw ConfigError("heating sweep requires [channels.thermal]");
            const PatternEvaluator eval(cfg);
            numerics::parallel_for(grid.size(), [&](std::size_t i) {
                ChannelOverrides o;
                o.entry_temperature = cfg.channels.thermal->resolve_temperature(grid[i]);
                fill(i, eval.evaluate(o));
            });
            break;
        }
        case SweepKind::coriolis_map: {
            const PatternEvaluator eval(cfg);
            numerics::parallel_for(grid.size(), [&](std::size_t i) {
                fill(i, eval.evaluate_at(grid[i]));
            });
            break;
        }
        case SweepKind::velocity_spread: {
            numerics::parallel_for(grid.size(), [&](std::size_t i) {
                if (!(grid[i] > 0.0))
                    throw PhysicsError("velocity_spread sweep: dv/v must be > 0");
                SimulationConfig c = cfg;
                const double sigma_v = grid[i] * cfg.beam.v0;
                c.beam.source_temperature =
                    cfg.molecule.mass * sigma_v * sigma_v / constants::k_B;
                apply_default_window(c.beam, c.molecule);
                fill(i, compute_pattern(c));
            });
            break;
        }
    }
    return rows;
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), ptr);
}

void write_sweep_csv(std::ostream& os, SweepKind kind, const std::vector<SweepRow>& rows) {
    os << sweep_grid_column(kind) << ",visibility,phase_rad,rate_hz\n";
    for (const auto& row : rows)
        os << format_double(row.grid) << ',' << format_double(row.visibility) << ','
           << format_double(row.phase) << ',' << format_double(row.rate) << '\n';
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
    os << "offset_m,counts\n";
    for (std::size_t i = 0; i < scan.offsets.size(); ++i)
        os << format_double(scan.offsets[i]) << ',' << scan.counts[i] << '\n';
}

} // namespace talbot
