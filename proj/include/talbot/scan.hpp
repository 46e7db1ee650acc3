#ifndef TALBOT_SCAN_HPP
#define TALBOT_SCAN_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "talbot/channels.hpp"
#include "talbot/optics.hpp"

namespace talbot {

struct ScanResult {
    std::vector<double> offsets;   // m
    std::vector<long long> counts;
    double integration_time = 0.0; // s per point
    FringePattern true_pattern;    // normalized, for test introspection
};

struct FringeFit {
    double visibility = 0.0;
    double phase = 0.0;     // rad
    double mean_rate = 0.0; // counts/s
    double mean_rate_n0 = 0.0; // fitted N0, counts per point
    std::array<std::array<double, 3>, 3> covariance{}; // of (N0, N0 V cos phi, N0 V sin phi)
    double chi2_reduced = 0.0;

    double visibility_sigma() const;
};

/// Draws Poisson counts around flux * survival * pattern(x) * t. The pattern
/// must be normalized (c_0 = 1); expected rates below -1e-9 of the mean are
/// rejected as unphysical, smaller negatives are clipped to zero.
ScanResult simulate_scan(const FringePattern& pattern, const std::vector<double>& offsets,
                         double flux, double integration_time, double survival,
                         std::uint64_t seed);

/// Weighted least squares of N(x) = N0 (1 + V sin(2 pi x / d + phi)) via the
/// exact linearization to (N0, N0 V cos phi, N0 V sin phi), Poisson weights
/// 1 / max(count, 1).
FringeFit fit_fringe(const ScanResult& scan, double period);

enum class SweepKind { pressure, heating, coriolis_map, velocity_spread };

SweepKind sweep_kind_from_name(const std::string& name);
std::string sweep_grid_column(SweepKind kind);

struct SweepRow {
    double grid = 0.0;
    double visibility = 0.0;
    double phase = 0.0; // rad
    double rate = 0.0;  // counts/s
};

/// Noiseless model curves on the given grid (sorted ascending). Grid units:
/// pressure in mbar, heating power in W, coriolis_map velocity in m/s,
/// velocity_spread as relative sigma dv/v. Points are evaluated concurrently
/// and assembled in grid order.
std::vector<SweepRow> run_sweep(SweepKind kind, const SimulationConfig& cfg,
                                const std::vector<double>& grid);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double x);

void write_sweep_csv(std::ostream& os, SweepKind kind, const std::vector<SweepRow>& rows);
void write_scan_csv(std::ostream& os, const ScanResult& scan);

} // namespace talbot

#endif
