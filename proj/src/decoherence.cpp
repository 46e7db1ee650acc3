#include "talbot/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace talbot {

namespace {

constexpr double kZeta3 = 1.2020569031595942854; // zeta(3)
constexpr double kPi = constants::pi;

/// G(a) = Int_0^inf x^2/(e^x - 1) [1 - sinc(a x)] dx, the gray-body
/// decoherence kernel in reduced units a = delta k_B T / (hbar c).
/// Expanding 1/(e^x-1) in e^{-nx} gives the exact series
///   G(a) = 2 zeta(3) - sum_n 2 n / (n^2 + a^2)^2,
/// summed with a midpoint integral tail correction. The term count follows
/// the peak of the summand at n ~ a/sqrt(3).
double kernel_g(double a) {
    if (a == 0.0) return 0.0;
    const double a2 = a * a;
    const int n_terms = std::clamp(static_cast<int>(8.0 * a), 48, 512);
    double s = 0.0;
    for (int n = n_terms; n >= 1; --n) {
        const double q = n * n + a2;
        s += 2.0 * n / (q * q);
    }
    const double edge = n_terms + 0.5;
    s += 1.0 / (edge * edge + a2); // Int_{N+1/2}^inf 2x/(x^2+a^2)^2 dx
    return 2.0 * kZeta3 - s;
}

} // namespace

void CollisionChannel::check() const {
    gas.check();
    if (pressure < 0.0) throw ConfigError("channels.collisional.pressure_mbar: must be >= 0");
    if (!(path_length > 0.0))
        throw ConfigError("channels.collisional.path_length_m: must be > 0");
}

void ThermalChannel::check() const {
    if (initial_temperature < 0.0)
        throw ConfigError("channels.thermal: initial temperature must be >= 0");
    if (time_steps < 16) throw ConfigError("channels.thermal.time_steps: must be >= 16");
}

void HeatingCalibration::check() const {
    if (table.size() < 2)
        throw ConfigError("heating_calibration: need at least two (power, temperature) rows");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first && table[i].second > table[i - 1].second))
            throw ConfigError(
                "heating_calibration: table must be strictly increasing in power and "
                "temperature");
    }
}

CollisionKinematics collision_kinematics(const CollisionChannel& ch, const MoleculeSpecies& mol,
                                         double v) {
    (void)mol;
    if (!(v > 0.0)) throw PhysicsError("collision_kinematics: v must be > 0");
    ch.check();
    CollisionKinematics out;
    out.number_density = ch.pressure / (constants::k_B * ch.gas.temperature);
    if (out.number_density > 0.0) {
        out.mean_free_path = 1.0 / (out.number_density * ch.gas.effective_cross_section);
        out.expected_collisions = ch.path_length / out.mean_free_path;
    } else {
        out.mean_free_path = std::numeric_limits<double>::infinity();
        out.expected_collisions = 0.0;
    }
    out.survival = std::exp(-out.expected_collisions);
    return out;
}

std::pair<ChannelReduction, double> collisional_reduction(const CollisionChannel& ch,
                                                          const MoleculeSpecies& mol, double v,
                                                          int harmonics) {
    const CollisionKinematics kin = collision_kinematics(ch, mol, v);
    const double r = std::exp(-kin.expected_collisions);
    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1, cplx{r, 0.0});
    rm[0] = cplx{1.0, 0.0};
    return {ChannelReduction::make("collisional", std::move(rm)), kin.survival};
}

double thermal_spectral_rate(const MoleculeSpecies& mol, double T, double omega) {
    if (!(T > 0.0)) throw PhysicsError("thermal_spectral_rate: T must be > 0");
    if (omega <= 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_B * T);
    return mol.absorption_cross_section * omega * omega /
           (kPi * kPi * constants::c * constants::c) / std::expm1(x);
}

double total_photon_rate(const MoleculeSpecies& mol, double T) {
    if (T <= 0.0) return 0.0;
    const double kt_over_hbar = constants::k_B * T / constants::hbar;
    return mol.absorption_cross_section / (kPi * kPi * constants::c * constants::c) *
           kt_over_hbar * kt_over_hbar * kt_over_hbar * 2.0 * kZeta3;
}

double emitted_power(const MoleculeSpecies& mol, double T) {
    if (T <= 0.0) return 0.0;
    const double kt = constants::k_B * T;
    const double h3 = constants::hbar * constants::hbar * constants::hbar;
    return mol.absorption_cross_section * kPi * kPi * kt * kt * kt * kt /
           (15.0 * h3 * constants::c * constants::c);
}

double peak_emission_wavelength(double T) {
    if (!(T > 0.0)) throw PhysicsError("peak_emission_wavelength: T must be > 0");
    // Peak of the radiated power per unit wavelength: x = hc/(lambda k T)
    // solves 5 (1 - e^-x) = x. Newton from the classic Wien value.
    double x = 4.965;
    for (int i = 0; i < 50; ++i) {
        const double f = 5.0 * (1.0 - std::exp(-x)) - x;
        const double df = 5.0 * std::exp(-x) - 1.0;
        const double dx = f / df;
        x -= dx;
        if (std::abs(dx) < 1e-14) break;
    }
    return constants::h * constants::c / (x * constants::k_B * T);
}

double internal_energy(const MoleculeSpecies& mol, double T) {
    if (!(mol.einstein_temperature > 0.0))
        throw PhysicsError("internal_energy: einstein_temperature_K must be > 0");
    const int modes = 3 * mol.n_atoms - 6;
    if (T <= 0.0) return 0.0;
    const double x = mol.einstein_temperature / T;
    return modes * constants::k_B * mol.einstein_temperature / std::expm1(x);
}

double heat_capacity(const MoleculeSpecies& mol, double T) {
    if (!(mol.einstein_temperature > 0.0))
        throw PhysicsError("heat_capacity: einstein_temperature_K must be > 0");
    if (!(T > 0.0)) throw PhysicsError("heat_capacity: T must be > 0");
    const int modes = 3 * mol.n_atoms - 6;
    const double x = mol.einstein_temperature / T;
    const double em = std::expm1(x);
    return modes * constants::k_B * x * x * std::exp(x) / (em * em);
}

CoolingTrajectory::CoolingTrajectory(std::vector<double> times, std::vector<double> temps,
                                     std::vector<double> rates)
    : times_(std::move(times)), temps_(std::move(temps)), rates_(std::move(rates)) {}

double CoolingTrajectory::operator()(double t) const {
    if (t <= times_.front()) return temps_.front();
    if (t >= times_.back()) return temps_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
    const double h = times_[i + 1] - times_[i];
    const double s = (t - times_[i]) / h;
    // Cubic Hermite with the analytic derivatives.
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * temps_[i] + (s3 - 2 * s2 + s) * h * rates_[i] +
           (-2 * s3 + 3 * s2) * temps_[i + 1] + (s3 - s2) * h * rates_[i + 1];
}

namespace {

std::pair<std::vector<double>, std::vector<double>> rk4_cooling(const MoleculeSpecies& mol,
                                                                double T0, double duration,
                                                                int steps) {
    auto deriv = [&](double T) {
        if (T <= 0.0) return 0.0;
        return -emitted_power(mol, T) / heat_capacity(mol, T);
    };
    std::vector<double> ts(static_cast<std::size_t>(steps) + 1);
    std::vector<double> Ts(static_cast<std::size_t>(steps) + 1);
    const double h = duration / steps;
    double T = T0;
    ts[0] = 0.0;
    Ts[0] = T;
    for (int i = 0; i < steps; ++i) {
        const double k1 = deriv(T);
        const double k2 = deriv(T + 0.5 * h * k1);
        const double k3 = deriv(T + 0.5 * h * k2);
        const double k4 = deriv(T + h * k3);
        T += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ts[static_cast<std::size_t>(i) + 1] = (i + 1) * h;
        Ts[static_cast<std::size_t>(i) + 1] = T;
    }
    return {std::move(ts), std::move(Ts)};
}

} // namespace

CoolingTrajectory radiative_cooling(const MoleculeSpecies& mol, double T0, double duration,
                                    int steps) {
    if (steps < 16) throw PhysicsError("radiative_cooling: steps must be >= 16");
    if (T0 < 0.0) throw PhysicsError("radiative_cooling: T0 must be >= 0");
    if (!(duration > 0.0)) throw PhysicsError("radiative_cooling: duration must be > 0");

    if (T0 == 0.0 || mol.absorption_cross_section == 0.0) {
        // No emission: constant temperature.
        std::vector<double> ts{0.0, duration};
        std::vector<double> Ts{T0, T0};
        return CoolingTrajectory(std::move(ts), std::move(Ts), {0.0, 0.0});
    }

    auto coarse = rk4_cooling(mol, T0, duration, steps);
    auto fine = rk4_cooling(mol, T0, duration, 2 * steps);
    const double Tc = coarse.second.back();
    const double Tf = fine.second.back();
    if (std::abs(Tc - Tf) > 1e-3 * Tf) {
        std::ostringstream os;
        os << "radiative_cooling: step-halving changes the final temperature by "
           << std::abs(Tc - Tf) / Tf << " (> 0.1%); increase steps beyond " << steps;
        throw NumericsError(os.str());
    }
    std::vector<double> rates(fine.second.size());
    for (std::size_t i = 0; i < fine.second.size(); ++i) {
        const double T = fine.second[i];
        rates[i] = T > 0.0 ? -emitted_power(mol, T) / heat_capacity(mol, T) : 0.0;
    }
    return CoolingTrajectory(std::move(fine.first), std::move(fine.second), std::move(rates));
}

double which_path_separation(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                             double v, double t) {
    if (!(v > 0.0)) throw PhysicsError("which_path_separation: v must be > 0");
    const double transit = cfg.separation / v;
    if (t < 0.0 || t > 2.0 * transit)
        throw PhysicsError("which_path_separation: t outside [0, 2 L / v]");
    const double dx_max =
        de_broglie_wavelength(mol, v) * cfg.separation / cfg.period();
    const double s = t <= transit ? t / transit : 2.0 - t / transit;
    return dx_max * s;
}

double thermal_decoherence_rate(const MoleculeSpecies& mol, double T, double delta) {
    if (T <= 0.0) return 0.0;
    const double kt_over_hbar = constants::k_B * T / constants::hbar;
    const double prefactor = mol.absorption_cross_section /
                             (kPi * kPi * constants::c * constants::c) * kt_over_hbar *
                             kt_over_hbar * kt_over_hbar;
    const double a = delta * constants::k_B * T / (constants::hbar * constants::c);
    return prefactor * kernel_g(a);
}

ChannelReduction thermal_reduction(const InterferometerConfig& cfg, const MoleculeSpecies& mol,
                                   const ThermalChannel& ch, double v, int harmonics) {
    ch.check();
    if (!(v > 0.0)) throw PhysicsError("thermal_reduction: v must be > 0");

    std::vector<cplx> rm(static_cast<std::size_t>(harmonics) + 1, cplx{1.0, 0.0});
    const double flight = 2.0 * cfg.separation / v;
    if (ch.initial_temperature == 0.0 || mol.absorption_cross_section == 0.0 ||
        !(flight > 0.0)) {
        return ChannelReduction::make("thermal", std::move(rm));
    }

    const CoolingTrajectory traj =
        radiative_cooling(mol, ch.initial_temperature, flight, ch.time_steps);

    // Composite Simpson over the flight time; the spectral integral is the
    // exact kernel series inside kernel_g. Temperature-dependent factors are
    // precomputed per time node and shared across the harmonics.
    const int n = ch.time_steps % 2 == 0 ? ch.time_steps : ch.time_steps + 1;
    const double h = flight / n;
    std::vector<double> rate_pref(static_cast<std::size_t>(n) + 1);
    std::vector<double> a_unit(static_cast<std::size_t>(n) + 1); // a for m = 1
    for (int i = 0; i <= n; ++i) {
        const double t = i * h;
        const double T = traj(t);
        const double kt_over_hbar = constants::k_B * T / constants::hbar;
        rate_pref[static_cast<std::size_t>(i)] =
            T > 0.0 ? mol.absorption_cross_section /
                          (kPi * kPi * constants::c * constants::c) * kt_over_hbar *
                          kt_over_hbar * kt_over_hbar
                    : 0.0;
        a_unit[static_cast<std::size_t>(i)] =
            which_path_separation(cfg, mol, v, t) * constants::k_B * T /
            (constants::hbar * constants::c);
    }

    double prev_d = 0.0;
    for (int m = 1; m <= harmonics; ++m) {
        double D;
        if (prev_d > 50.0) {
            // saturated: higher harmonics are at least as suppressed and the
            // factor is already below 2e-22
            D = prev_d;
        } else {
            D = 0.0;
            for (int i = 0; i <= n; ++i) {
                const std::size_t idx = static_cast<std::size_t>(i);
                const double f = rate_pref[idx] * kernel_g(m * a_unit[idx]);
                const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                D += w * f;
            }
            D *= h / 3.0;
        }
        prev_d = D;
        rm[static_cast<std::size_t>(m)] = cplx{std::exp(-D), 0.0};
    }
    return ChannelReduction::make("thermal", std::move(rm));
}

double heating_to_temperature(const HeatingCalibration& cal, double power) {
    cal.check();
    if (power < cal.table.front().first || power > cal.table.back().first) {
        std::ostringstream os;
        os << "heating_to_temperature: power " << power << " W outside the calibrated range ["
           << cal.table.front().first << ", " << cal.table.back().first << "] W";
        throw PhysicsError(os.str());
    }
    for (std::size_t i = 1; i < cal.table.size(); ++i) {
        if (power <= cal.table[i].first) {
            const auto& [p0, t0] = cal.table[i - 1];
            const auto& [p1, t1] = cal.table[i];
            const double s = (power - p0) / (p1 - p0);
            return t0 + s * (t1 - t0);
        }
    }
    return cal.table.back().second;
}

} // namespace talbot
