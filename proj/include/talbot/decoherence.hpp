#ifndef TALBOT_DECOHERENCE_HPP
#define TALBOT_DECOHERENCE_HPP

#include <utility>
#include <vector>

#include "talbot/optics.hpp"
#include "talbot/types.hpp"

namespace talbot {

struct CollisionChannel {
    GasSpecies gas;
    double pressure = 0.0;    // Pa
    double path_length = 0.0; // m, total beam path in gas

    void check() const;
};

struct ThermalChannel {
    double initial_temperature = 0.0; // K, at interferometer entry
    int time_steps = 256;             // cooling / decoherence integration resolution

    void check() const;
};

/// Laser heating power to mean internal entry temperature, strictly
/// increasing piecewise-linear table.
struct HeatingCalibration {
    std::vector<std::pair<double, double>> table; // (power W, temperature K)

    void check() const;
};

struct CollisionKinematics {
    double number_density = 0.0;     // 1/m^3
    double mean_free_path = 0.0;     // m, infinity at zero pressure
    double expected_collisions = 0.0;
    double survival = 1.0;           // fraction reaching the detector
};

CollisionKinematics collision_kinematics(const CollisionChannel& ch, const MoleculeSpecies& mol,
                                         double v);

/// Every collision fully decoheres: r_m = exp(-N) for m != 0. The identical
/// count-rate survival factor is returned separately and never folded into
/// the fringe reduction.
std::pair<ChannelReduction, double> collisional_reduction(const CollisionChannel& ch,
                                                          const MoleculeSpecies& mol, double v,
                                                          int harmonics);

/// Gray-body Planck photon rate density, photons / (s * (rad/s)).
double thermal_spectral_rate(const MoleculeSpecies& mol, double T, double omega);

/// Total photon emission rate, 1/s (closed form of the spectral integral).
double total_photon_rate(const MoleculeSpecies& mol, double T);

/// Total radiated power, W (closed form).
double emitted_power(const MoleculeSpecies& mol, double T);

/// Wavelength of the peak of the emitted power per unit wavelength.
double peak_emission_wavelength(double T);

/// Einstein-model internal energy of the 3N-6 vibrational modes, J.
double internal_energy(const MoleculeSpecies& mol, double T);
double heat_capacity(const MoleculeSpecies& mol, double T);

/// Radiative cooling trajectory T(t), dense-evaluable via cubic Hermite
/// interpolation on the RK4 grid.
class CoolingTrajectory {
public:
    CoolingTrajectory(std::vector<double> times, std::vector<double> temps,
                      std::vector<double> rates);
    double operator()(double t) const;
    double duration() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& temperatures() const { return temps_; }

private:
    std::vector<double> times_;
    std::vector<double> temps_;
    std::vector<double> rates_; // dT/dt at the grid points
};

/// Integrates dU/dt = -P_rad(T) with explicit RK4; refuses if halving the
/// step still changes the final temperature by more than 0.1%.
CoolingTrajectory radiative_cooling(const MoleculeSpecies& mol, double T0, double duration,
                                    int steps);

/// Transverse separation of the interfering paths at time t after G1,
/// triangular with apex lambda_dB L / d at the central grating.
double which_path_separation(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                             double v, double t);

/// Orientation-averaged single-photon decoherence kernel integrated over the
/// gray-body spectrum: returns Int dw Gamma(w,T) [1 - sinc(w delta / c)] in
/// 1/s for a path separation delta.
double thermal_decoherence_rate(const MoleculeSpecies& mol, double T, double delta);

/// r_m = exp(-Int_0^{2L/v} dt Int dw Gamma(w, T(t)) [1 - sinc(w m dx(t)/c)]).
ChannelReduction thermal_reduction(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                                   const ThermalChannel& ch, double v, int harmonics);

double heating_to_temperature(const HeatingCalibration& cal, double power);

} // namespace talbot

#endif
