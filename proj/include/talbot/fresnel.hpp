#ifndef TALBOT_FRESNEL_HPP
#define TALBOT_FRESNEL_HPP

#include <vector>

#include "talbot/optics.hpp"
#include "talbot/types.hpp"

namespace talbot {

/// Grid resolution of the brute-force wave propagation.
struct OracleGrid {
    int samples_per_period = 128;
    int n_periods = 32;
    int n_source_points = 128;

    void check() const;
};

/// Brute-force ground truth for the analytic Talbot-Lau propagation: point
/// sources spanning one G1 period (mutually incoherent, weighted by the G1
/// intensity transmission), paraxial FFT propagation with transfer function
/// exp(-i pi lambda L f^2) to G2 and on to G3, detected flux behind the
/// offset G3 mask. Periodic boundary conditions; deterministic.
std::vector<double> fresnel_oracle(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                                   double v, const OracleGrid& grid,
                                   const std::vector<double>& scan_offsets);

/// Same propagation with an explicit wavelength (the classical-limit checks
/// scale lambda away from the de Broglie value).
std::vector<double> fresnel_oracle_at_wavelength(const InterferometerConfig& cfg,
                                                 const MoleculeSpecies& mol, double lambda,
                                                 const OracleGrid& grid,
                                                 const std::vector<double>& scan_offsets);

/// Scans one grating period and condenses the oracle flux into fringe
/// harmonics via a discrete Fourier transform.
FringePattern oracle_pattern(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                             double v, const OracleGrid& grid, int harmonics = 4,
                             int scan_points = 64);

/// Total flux arriving at the G3 plane (before the mask) divided by the flux
/// emitted by the weighted sources; passivity demands <= 1.
double oracle_flux_ratio(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                         double v, const OracleGrid& grid);

} // namespace talbot

#endif
