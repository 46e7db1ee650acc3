#include <doctest.h>

#include <cmath>

#include "talbot/decoherence.hpp"
#include "talbot/numerics.hpp"

using namespace talbot;

namespace {

MoleculeSpecies c70_thermal() {
    MoleculeSpecies mol;
    mol.mass = convert_mass(840.0, MassUnit::Da);
    mol.n_atoms = 70;
    mol.internal_temperature = 900.0;
    mol.einstein_temperature = 1050.0;
    mol.absorption_cross_section = 2.0e-21; // m^2
    return mol;
}

GasSpecies argon() {
    GasSpecies gas;
    gas.mass = convert_mass(39.948, MassUnit::Da);
    gas.temperature = 300.0;
    gas.effective_cross_section = 1e-16;
    return gas;
}

InterferometerConfig tli() {
    Grating g;
    g.kind = GratingKind::material;
    g.period = 991e-9;
    g.open_fraction = 0.479;
    g.thickness = 500e-9;
    InterferometerConfig cfg;
    cfg.gratings = {g, g, g};
    cfg.separation = 0.44;
    return cfg;
}

} // namespace

TEST_SUITE("decoherence") {

TEST_CASE("collision kinematics hand-checked point") {
    CollisionChannel ch;
    ch.gas = argon();
    ch.pressure = 1e-4; // Pa = 1e-6 mbar
    ch.path_length = 0.88;
    const auto kin = collision_kinematics(ch, c70_thermal(), 100.0);
    CHECK(kin.number_density == doctest::Approx(2.414e16).epsilon(1e-3));
    CHECK(kin.mean_free_path == doctest::Approx(0.414).epsilon(1e-2));
    CHECK(kin.expected_collisions == doctest::Approx(2.13).epsilon(1e-2));
    CHECK(kin.survival == doctest::Approx(0.119).epsilon(1e-2));
}

TEST_CASE("zero pressure is harmless") {
    CollisionChannel ch;
    ch.gas = argon();
    ch.pressure = 0.0;
    ch.path_length = 0.88;
    const auto kin = collision_kinematics(ch, c70_thermal(), 100.0);
    CHECK(kin.expected_collisions == 0.0);
    CHECK(kin.survival == 1.0);
    const auto [red, survival] = collisional_reduction(ch, c70_thermal(), 100.0, 4);
    CHECK(survival == 1.0);
    for (int m = 0; m <= 4; ++m) CHECK(red.coeff(m) == cplx{1.0, 0.0});
}

TEST_CASE("expected collisions are linear in pressure") {
    CollisionChannel ch;
    ch.gas = argon();
    ch.path_length = 0.88;
    ch.pressure = 3e-5;
    const double n1 = collision_kinematics(ch, c70_thermal(), 100.0).expected_collisions;
    ch.pressure = 6e-5;
    const double n2 = collision_kinematics(ch, c70_thermal(), 100.0).expected_collisions;
    ch.pressure = 9e-5;
    const double n3 = collision_kinematics(ch, c70_thermal(), 100.0).expected_collisions;
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-12));
    CHECK(n3 == doctest::Approx(3.0 * n1).epsilon(1e-12));
}

TEST_CASE("visibility decay closes to exp(-p/p0), p0 = k T / (sigma path)") {
    CollisionChannel ch;
    ch.gas = argon();
    ch.path_length = 0.88;
    const double p0 = constants::k_B * ch.gas.temperature /
                      (ch.gas.effective_cross_section * ch.path_length);
    for (double p : {1e-6, 5e-5, 2e-4}) {
        ch.pressure = p;
        const auto [red, survival] = collisional_reduction(ch, c70_thermal(), 100.0, 3);
        CHECK(std::abs(red.coeff(1)) == doctest::Approx(std::exp(-p / p0)).epsilon(1e-12));
        CHECK(std::abs(red.coeff(3)) == doctest::Approx(std::exp(-p / p0)).epsilon(1e-12));
        CHECK(survival == doctest::Approx(std::exp(-p / p0)).epsilon(1e-12));
    }
}

TEST_CASE("gray-body spectral rate") {
    const MoleculeSpecies mol = c70_thermal();
    const double omega = 2.0e14;
    // vanishes toward T -> 0
    CHECK(thermal_spectral_rate(mol, 1.0, omega) < 1e-300);
    // linear in the absorption cross-section
    MoleculeSpecies doubled = mol;
    doubled.absorption_cross_section *= 2.0;
    CHECK(thermal_spectral_rate(doubled, 1500.0, omega) ==
          doctest::Approx(2.0 * thermal_spectral_rate(mol, 1500.0, omega)).epsilon(1e-12));
}

// Spectral integrals evaluated segment by segment in units of k T / hbar;
// the integrand decays as e^-x so [0, 45] carries everything above 1e-16.
template <typename F>
static double spectral_quadrature(double T, F integrand) {
    const double unit = constants::k_B * T / constants::hbar;
    const double edges[] = {1e-6, 0.5, 2.0, 6.0, 15.0, 45.0};
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < std::size(edges); ++s)
        total += numerics::adaptive_simpson(integrand, edges[s] * unit, edges[s + 1] * unit,
                                            1e-10);
    return total;
}

TEST_CASE("closed-form photon rate and power match quadrature") {
    const MoleculeSpecies mol = c70_thermal();
    const double T = 1450.0;
    const double rate_quad = spectral_quadrature(
        T, [&](double w) { return thermal_spectral_rate(mol, T, w); });
    CHECK(total_photon_rate(mol, T) == doctest::Approx(rate_quad).epsilon(1e-6));
    const double power_quad = spectral_quadrature(T, [&](double w) {
        return constants::hbar * w * thermal_spectral_rate(mol, T, w);
    });
    CHECK(emitted_power(mol, T) == doctest::Approx(power_quad).epsilon(1e-6));
}

TEST_CASE("most probable emitted wavelength near 2 um beyond 1450 K") {
    CHECK(peak_emission_wavelength(1450.0) == doctest::Approx(2.0e-6).epsilon(2e-2));
    // about ten times the 266 nm grating period at 1000 K
    CHECK(peak_emission_wavelength(1000.0) == doctest::Approx(2.9e-6).epsilon(2e-2));
    // Wien scaling
    CHECK(peak_emission_wavelength(2000.0) ==
          doctest::Approx(0.5 * peak_emission_wavelength(1000.0)).epsilon(1e-9));
}

TEST_CASE("Einstein internal energy matches the 6-7 eV fullerene scale") {
    MoleculeSpecies c60 = c70_thermal();
    c60.mass = convert_mass(720.0, MassUnit::Da);
    c60.n_atoms = 60; // 174 modes
    const double u_ev = internal_energy(c60, 900.0) / 1.602176634e-19;
    CHECK(u_ev > 5.5);
    CHECK(u_ev < 8.0);
    // dU/dT equals the heat capacity numerically
    const double h = 0.01;
    const double dudt = (internal_energy(c60, 900.0 + h) - internal_energy(c60, 900.0 - h)) /
                        (2.0 * h);
    CHECK(heat_capacity(c60, 900.0) == doctest::Approx(dudt).epsilon(1e-6));
}

TEST_CASE("zero emissivity keeps the temperature constant") {
    MoleculeSpecies mol = c70_thermal();
    mol.absorption_cross_section = 0.0;
    const CoolingTrajectory traj = radiative_cooling(mol, 3000.0, 0.01, 64);
    CHECK(traj(0.0) == 3000.0);
    CHECK(traj(0.005) == 3000.0);
    CHECK(traj(0.01) == 3000.0);
}

TEST_CASE("cooling trajectory is strictly decreasing with nonnegative emitted power") {
    const MoleculeSpecies mol = c70_thermal();
    const CoolingTrajectory traj = radiative_cooling(mol, 3000.0, 0.0088, 256);
    double prev = traj(0.0);
    CHECK(prev == 3000.0);
    for (int i = 1; i <= 100; ++i) {
        const double t = 0.0088 * i / 100.0;
        const double cur = traj(t);
        CHECK(cur < prev);
        CHECK(emitted_power(mol, cur) >= 0.0);
        prev = cur;
    }
}

TEST_CASE("doubling the emissivity halves the cooling time exactly") {
    const MoleculeSpecies mol = c70_thermal();
    MoleculeSpecies fast = mol;
    fast.absorption_cross_section *= 2.0;
    const CoolingTrajectory slow = radiative_cooling(mol, 3000.0, 0.02, 128);
    const CoolingTrajectory quick = radiative_cooling(fast, 3000.0, 0.01, 128);
    for (double t : {0.001, 0.004, 0.009}) {
        CHECK(quick(t) == doctest::Approx(slow(2.0 * t)).epsilon(1e-6));
    }
}

TEST_CASE("cooling regression pin for the C70 default") {
    const MoleculeSpecies mol = c70_thermal();
    const CoolingTrajectory traj = radiative_cooling(mol, 3000.0, 0.006, 256);
    // frozen from a step-doubled RK4 run of this configuration
    CHECK(traj(0.006) == doctest::Approx(671.15).epsilon(1e-3));
}

TEST_CASE("which-path separation triangle") {
    const InterferometerConfig cfg = tli();
    const MoleculeSpecies mol = c70_thermal();
    const double v = 100.0;
    const double transit = cfg.separation / v;
    CHECK(which_path_separation(cfg, mol, v, 0.0) == 0.0);
    CHECK(which_path_separation(cfg, mol, v, 2.0 * transit) ==
          doctest::Approx(0.0).epsilon(1e-15));
    // apex 2.11 um for C70 at 100 m/s in the 991 nm / 440 mm machine
    CHECK(which_path_separation(cfg, mol, v, transit) ==
          doctest::Approx(2.11e-6).epsilon(2e-3));
    // mirrored profile
    CHECK(which_path_separation(cfg, mol, v, 0.5 * transit) ==
          doctest::Approx(which_path_separation(cfg, mol, v, 1.5 * transit)).epsilon(1e-12));
    CHECK_THROWS_AS(which_path_separation(cfg, mol, v, 2.1 * transit), PhysicsError);
}

TEST_CASE("thermal kernel matches nested quadrature") {
    const MoleculeSpecies mol = c70_thermal();
    const double T = 1800.0;
    for (double delta : {50e-9, 500e-9, 2.11e-6, 10e-6}) {
        const double quad = spectral_quadrature(T, [&](double w) {
            const double arg = w * delta / constants::c;
            const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
            return thermal_spectral_rate(mol, T, w) * (1.0 - sinc);
        });
        CHECK(thermal_decoherence_rate(mol, T, delta) ==
              doctest::Approx(quad).epsilon(1e-6));
    }
}

TEST_CASE("monochromatic kernel checkpoints") {
    // lambda_photon = 2 dx: argument pi, kernel 1 - sinc(pi) = 1
    CHECK(1.0 - std::sin(constants::pi) / constants::pi == doctest::Approx(1.0));
    // long-wavelength: dx = lambda/10 gives the 0.064 momentum-diffusion kernel
    const double arg = 2.0 * constants::pi * 0.1;
    CHECK(1.0 - std::sin(arg) / arg == doctest::Approx(0.0645).epsilon(2e-2));
}

TEST_CASE("trivial thermal channels leave the pattern untouched") {
    const InterferometerConfig cfg = tli();
    const MoleculeSpecies mol = c70_thermal();
    ThermalChannel ch;
    ch.initial_temperature = 0.0;
    const ChannelReduction r = thermal_reduction(cfg, mol, ch, 100.0, 4);
    for (int m = 0; m <= 4; ++m) CHECK(r.coeff(m) == cplx{1.0, 0.0});
}

TEST_CASE("thermal reduction is monotone in temperature, emissivity and harmonic") {
    const InterferometerConfig cfg = tli();
    // Weak-cooling regime: the emissivity is small enough that the molecule
    // stays near its entry temperature for the whole flight. (With strong
    // cooling the order in sigma_abs can invert: a brighter molecule cools
    // out of the hot phase before the path separation opens up.)
    MoleculeSpecies mol = c70_thermal();
    mol.absorption_cross_section = 1e-23;
    ThermalChannel ch;
    ch.initial_temperature = 1500.0;

    const ChannelReduction r1500 = thermal_reduction(cfg, mol, ch, 100.0, 3);
    ch.initial_temperature = 2500.0;
    const ChannelReduction r2500 = thermal_reduction(cfg, mol, ch, 100.0, 3);
    CHECK(std::abs(r2500.coeff(1)) < std::abs(r1500.coeff(1)));

    MoleculeSpecies brighter = mol;
    brighter.absorption_cross_section *= 3.0;
    const ChannelReduction rb = thermal_reduction(cfg, brighter, ch, 100.0, 3);
    CHECK(std::abs(rb.coeff(1)) < std::abs(r2500.coeff(1)));

    // higher harmonics decohere at least as fast
    CHECK(std::abs(r2500.coeff(2)) <= std::abs(r2500.coeff(1)) + 1e-15);
    CHECK(std::abs(r2500.coeff(3)) <= std::abs(r2500.coeff(2)) + 1e-15);

    // smaller period opens a larger path separation at the same flight time
    InterferometerConfig finer = cfg;
    for (auto& g : finer.gratings) g.period = 266e-9;
    const ChannelReduction rfine = thermal_reduction(finer, mol, ch, 100.0, 3);
    CHECK(std::abs(rfine.coeff(1)) < std::abs(r2500.coeff(1)));
}

TEST_CASE("heating calibration interpolation") {
    HeatingCalibration cal;
    cal.table = {{0.0, 900.0}, {10.5, 3000.0}};
    CHECK(heating_to_temperature(cal, 0.0) == 900.0);
    CHECK(heating_to_temperature(cal, 10.5) == 3000.0);
    CHECK(heating_to_temperature(cal, 5.25) == doctest::Approx(1950.0));
    CHECK(heating_to_temperature(cal, 3.0) == doctest::Approx(1500.0));
    // monotone
    double prev = heating_to_temperature(cal, 0.0);
    for (double p = 0.5; p <= 10.5; p += 0.5) {
        const double cur = heating_to_temperature(cal, p);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK_THROWS_AS(heating_to_temperature(cal, -0.1), PhysicsError);
    CHECK_THROWS_AS(heating_to_temperature(cal, 11.0), PhysicsError);

    HeatingCalibration bad;
    bad.table = {{0.0, 900.0}, {5.0, 800.0}};
    CHECK_THROWS_AS(bad.check(), ConfigError);
}

} // TEST_SUITE
