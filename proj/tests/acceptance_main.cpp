// Acceptance suite: runs every calibrated end-to-end check and prints one
// pass/fail line per criterion. Exit code equals the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "talbot/channels.hpp"
#include "talbot/config.hpp"
#include "talbot/decoherence.hpp"
#include "talbot/fresnel.hpp"
#include "talbot/numerics.hpp"
#include "talbot/phase_averaging.hpp"
#include "talbot/scan.hpp"

using namespace talbot;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %d: %-28s %s  (%.1f s)\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int id, const char* name, Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, name, pass, detail, seconds);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

std::string config_path(const char* file) {
    return std::string(TALBOT_CONFIG_DIR) + "/" + file;
}

ScanResult noiseless_scan(const FringePattern& normalized, double counts_per_point,
                          int points) {
    ScanResult scan;
    scan.integration_time = 1.0;
    scan.true_pattern = normalized;
    for (int i = 0; i < points; ++i) {
        const double x = normalized.period * i / points;
        scan.offsets.push_back(x);
        scan.counts.push_back(std::llround(counts_per_point * normalized.value_at(x)));
    }
    return scan;
}

// criterion 1 ---------------------------------------------------------------
bool de_broglie_check(std::string& detail) {
    MoleculeSpecies mol;
    mol.mass = convert_mass(25000.0, MassUnit::Da);
    mol.n_atoms = 1700;
    const double lambda = de_broglie_wavelength(mol, 300.0);
    const bool near_value = std::abs(lambda - 5.3e-14) / 5.3e-14 < 0.01;
    const bool near_published = std::abs(lambda - 50e-15) / 50e-15 < 0.10;
    detail = fmt("lambda = %.4e m, vs published 50 fm: %.1f%%", lambda,
                 100.0 * std::abs(lambda - 50e-15) / 50e-15);
    return near_value && near_published;
}

// criterion 2 ---------------------------------------------------------------
bool collisional_calibration(std::string& detail) {
    SimulationConfig cfg = load_config(config_path("c70_tli.toml"));
    const double p1 = 3e-8 * 100.0; // Pa
    const double p2 = 5e-7 * 100.0;

    PatternEvaluator eval(cfg);
    ChannelOverrides vacuum;
    vacuum.pressure = 0.0;
    const double v0 = eval.evaluate(vacuum).pattern.visibility();
    if (!(v0 > 0.42)) {
        detail = fmt("zero-pressure visibility %.4f leaves no calibration headroom", v0);
        return false;
    }
    // one-parameter calibration: sigma_eff such that V(p1) = 0.42
    const double sigma_eff = std::log(v0 / 0.42) * constants::k_B *
                             cfg.channels.collisional->gas.temperature /
                             (p1 * cfg.channels.collisional->path_length);

    ChannelOverrides at1{p1, {}, sigma_eff};
    ChannelOverrides at2{p2, {}, sigma_eff};
    const PatternResult r1 = eval.evaluate(at1);
    const PatternResult r2 = eval.evaluate(at2);
    const double v_p1 = r1.pattern.visibility();
    const double v_p2 = r2.pattern.visibility();

    // end to end through the counting model and the sinusoid fit
    const ScanResult scan = noiseless_scan(r1.pattern.normalized(), 1e8, 50);
    const FringeFit fit = fit_fringe(scan, cfg.interferometer.period());

    // noiseless sweep: ln V linear in p with tiny residuals
    cfg.channels.collisional->gas.effective_cross_section = sigma_eff;
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(2e-6 * i / 24.0);
    const auto rows = run_sweep(SweepKind::pressure, cfg, grid);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : rows) {
        sx += row.grid;
        sy += std::log(row.visibility);
        sxx += row.grid * row.grid;
        sxy += row.grid * std::log(row.visibility);
    }
    const double n = static_cast<double>(rows.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double inter = (sy - slope * sx) / n;
    double max_resid = 0.0;
    for (const auto& row : rows)
        max_resid = std::max(max_resid,
                             std::abs(std::log(row.visibility) - inter - slope * row.grid));
    const double slope_expected = -sigma_eff * cfg.channels.collisional->path_length /
                                  (constants::k_B * cfg.channels.collisional->gas.temperature) *
                                  100.0; // per mbar

    const bool ok = std::abs(v_p1 - 0.42) < 1e-6 && std::abs(v_p2 - 0.34) <= 0.01 &&
                    std::abs(fit.visibility - v_p1) < 1e-3 && max_resid < 1e-10 &&
                    std::abs(slope / slope_expected - 1.0) < 1e-9;
    detail = fmt("V0=%.4f  V(3e-8)=%.6f  V(5e-7)=%.6f  fit=%.6f  lnV resid=%.1e", v0, v_p1,
                 v_p2, fit.visibility, max_resid);
    return ok;
}

// criterion 3 ---------------------------------------------------------------
bool thermal_shape(std::string& detail) {
    const SimulationConfig cfg = load_config(config_path("c70_heating.toml"));
    std::vector<double> grid;
    for (int i = 0; i <= 14; ++i) grid.push_back(10.5 * i / 14.0); // includes 3.0 W
    const auto rows = run_sweep(SweepKind::heating, cfg, grid);

    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].visibility > rows[i - 1].visibility * (1.0 + 1e-9)) monotone = false;

    const double v0w = rows.front().visibility;
    bool retention = true;
    for (const auto& row : rows) {
        const double t_entry = cfg.channels.thermal->resolve_temperature(row.grid);
        if (t_entry <= 1500.0 && row.visibility < 0.90 * v0w) retention = false;
    }
    const double v_hot = rows.back().visibility;
    const bool killed = v_hot < 0.02;

    detail = fmt("V(0W)=%.4f  V(3W,1500K)/V(0W)=%.4f  V(10.5W)=%.5f  monotone=%s", v0w,
                 rows[4].visibility / v0w, v_hot, monotone ? "yes" : "no");
    return monotone && retention && killed;
}

// criterion 4 ---------------------------------------------------------------
bool long_wavelength_regime(std::string& detail) {
    // photon spectrum peaked at 2.66 um; path separation 266 nm
    const double lambda_peak = 2.66e-6;
    double t_lo = 500.0, t_hi = 3000.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (t_lo + t_hi);
        (peak_emission_wavelength(mid) > lambda_peak ? t_lo : t_hi) = mid;
    }
    const double T = 0.5 * (t_lo + t_hi);

    // kernel at the peak wavelength: 1 - sinc(2 pi dx / lambda)
    const double arg = 2.0 * constants::pi * 266e-9 / lambda_peak;
    const double kernel_peak = 1.0 - std::sin(arg) / arg;

    // spectrum-averaged loss for exactly one expected photon
    MoleculeSpecies probe;
    probe.mass = convert_mass(25000.0, MassUnit::Da);
    probe.n_atoms = 1700;
    probe.absorption_cross_section = 1e-21;
    const double per_photon =
        thermal_decoherence_rate(probe, T, 266e-9) / total_photon_rate(probe, T);
    const double loss = 1.0 - std::exp(-per_photon);

    detail = fmt("T(peak 2.66um)=%.0f K, kernel(peak)=%.4f, single-photon loss=%.4f", T,
                 kernel_peak, loss);
    return std::abs(kernel_peak - 0.064) < 0.015 && loss < 0.10;
}

// criterion 5 ---------------------------------------------------------------
bool coriolis_phase_map(std::string& detail) {
    SimulationConfig cfg = load_config(config_path("lumi_coriolis.toml"));
    const PatternEvaluator with_rotation(cfg);
    SimulationConfig still = cfg;
    still.channels.inertial = InertialMode::off;
    const PatternEvaluator no_rotation(still);

    // inertial phase per velocity, optics sign structure divided out
    std::vector<double> phases;
    double prev = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double v = 180.0 + (420.0 - 180.0) * i / 40.0;
        const cplx ratio = with_rotation.evaluate_at(v).pattern.coeff(1) /
                           no_rotation.evaluate_at(v).pattern.coeff(1);
        double phi = std::arg(ratio);
        if (i > 0) { // unwrap toward continuity
            while (phi - prev > constants::pi) phi -= 2.0 * constants::pi;
            while (phi - prev < -constants::pi) phi += 2.0 * constants::pi;
        }
        phases.push_back(phi);
        prev = phi;
    }
    const auto [lo, hi] = std::minmax_element(phases.begin(), phases.end());
    const double span = *hi - *lo;

    const double v_mono = with_rotation.evaluate_at(cfg.beam.v0).pattern.visibility();
    const double v_avg = with_rotation.evaluate({}).pattern.visibility();

    detail = fmt("phase span=%.2f rad (2pi=6.28), V_mono=%.4f, V_avg=%.4f, ratio=%.3f", span,
                 v_mono, v_avg, v_avg / v_mono);
    return span > 2.0 * constants::pi && v_avg < 0.5 * v_mono;
}

// criterion 6 ---------------------------------------------------------------
bool oracle_equivalence(std::string& detail) {
    MoleculeSpecies mol;
    mol.mass = convert_mass(840.0, MassUnit::Da);
    mol.n_atoms = 70;
    Grating g;
    g.kind = GratingKind::material;
    g.period = 991e-9;
    g.open_fraction = 0.479;
    g.thickness = 500e-9;
    InterferometerConfig cfg;
    cfg.gratings = {g, g, g};
    cfg.separation = 0.44;

    double worst_dv = 0.0, worst_dphi = 0.0;
    for (double ratio : {0.5, 1.0, 1.5, 2.0, 2.5}) {
        const double lambda = g.period * g.period * ratio / cfg.separation;
        const double v = constants::h / (mol.mass * lambda);
        const FringePattern ana = fringe_coefficients(cfg, mol, v, {}, 48, 1.0);
        const FringePattern orc = oracle_pattern(cfg, mol, v, OracleGrid{}, 4, 64);
        worst_dv = std::max(worst_dv, std::abs(ana.visibility() - orc.visibility()));
        if (ana.visibility() > 0.005 && orc.visibility() > 0.005) {
            const double dphi =
                std::remainder(ana.phase() - orc.phase(), 2.0 * constants::pi);
            worst_dphi = std::max(worst_dphi, std::abs(dphi));
        }
    }
    detail = fmt("max |dV| = %.4f (<= 0.02), max |dphase| = %.4f rad (<= 0.05)", worst_dv,
                 worst_dphi);
    return worst_dv <= 0.02 && worst_dphi <= 0.05;
}

// criterion 7 ---------------------------------------------------------------
bool property_suite(std::string& detail) {
    MoleculeSpecies mol;
    mol.mass = convert_mass(840.0, MassUnit::Da);
    mol.n_atoms = 70;
    mol.internal_temperature = 900.0;
    mol.einstein_temperature = 1050.0;
    mol.absorption_cross_section = 1e-23;
    Grating g;
    g.kind = GratingKind::material;
    g.period = 991e-9;
    g.open_fraction = 0.479;
    g.thickness = 500e-9;
    InterferometerConfig itf;
    itf.gratings = {g, g, g};
    itf.separation = 0.44;

    bool ok = true;
    std::string why;

    // trivial limits give exact unit reductions
    {
        CollisionChannel ch;
        ch.gas = {convert_mass(39.948, MassUnit::Da), 300.0, 1e-16};
        ch.pressure = 0.0;
        ch.path_length = 0.88;
        const auto [red, survival] = collisional_reduction(ch, mol, 100.0, 4);
        for (int m = 0; m <= 4; ++m)
            if (red.coeff(m) != cplx{1.0, 0.0}) ok = false;
        if (survival != 1.0) ok = false;

        ThermalChannel tc;
        tc.initial_temperature = 0.0;
        const auto rt = thermal_reduction(itf, mol, tc, 100.0, 4);
        for (int m = 0; m <= 4; ++m)
            if (rt.coeff(m) != cplx{1.0, 0.0}) ok = false;

        const auto rv = vibration_reduction(VibrationModel{}, g.period, 4);
        for (int m = 0; m <= 4; ++m)
            if (rv.coeff(m) != cplx{1.0, 0.0}) ok = false;

        VelocitySample one;
        one.velocities = {100.0};
        one.weights = {1.0};
        InterferometerConfig rot = itf;
        rot.gravity_accel = 9.81;
        const auto ri = inertial_reduction(rot, one, 4);
        for (int m = 0; m <= 4; ++m)
            if (std::abs(std::abs(ri.coeff(m)) - 1.0) > 1e-12) ok = false;

        if (electric_fringe_shift(itf, mol, 100.0) != 0.0) ok = false;

        ClockModel clock;
        clock.mode_frequencies = {1e13};
        clock.height_separation = 1e-6;
        clock.evolution_time = 0.0;
        if (clock_dephasing(clock) != 1.0) ok = false;
        if (!ok) why += "unit-reduction; ";
    }

    // hermitian symmetry of a produced pattern, exactly
    {
        Grating cp = g;
        cp.c3 = 3.204e-48;
        InterferometerConfig ccfg = itf;
        ccfg.gratings = {cp, cp, cp};
        const FringePattern p = fringe_coefficients(ccfg, mol, 115.0, {}, 24, 1.0);
        for (int m = 0; m <= p.harmonics(); ++m)
            if (p.coeff(-m) != std::conj(p.coeff(m))) ok = false;
        if (!ok) why += "hermitian; ";
    }

    // pure phase grating has unit coefficient power
    double power = 0.0;
    {
        Grating opt;
        opt.kind = GratingKind::optical_phase;
        opt.period = 991e-9;
        opt.phase_amplitude = 2.7;
        power = optical_grating_coefficients(opt, 24).power_sum();
        if (std::abs(power - 1.0) > 1e-6) {
            ok = false;
            why += "phase-grating power; ";
        }
    }

    // fit exactness on noiseless data
    double fit_err = 0.0;
    {
        FringePattern p;
        p.period = g.period;
        p.c = {cplx{1.0, 0.0},
               0.5 * 0.42 * std::polar(1.0, 1.234) * cplx{0.0, -1.0}};
        ScanResult scan = noiseless_scan(p, 1e12, 40);
        const FringeFit fit = fit_fringe(scan, g.period);
        fit_err = std::abs(fit.visibility - 0.42);
        if (fit_err > 1e-10) {
            ok = false;
            why += "fit exactness; ";
        }
    }

    // statistical coverage of the 1 sigma visibility interval
    int covered = 0;
    {
        FringePattern p;
        p.period = g.period;
        p.c = {cplx{1.0, 0.0}, 0.5 * 0.42 * std::polar(1.0, 1.9) * cplx{0.0, -1.0}};
        for (int k = 0; k < 200; ++k) {
            std::vector<double> offsets;
            for (int i = 0; i < 50; ++i) offsets.push_back(g.period * i / 50);
            const ScanResult scan =
                simulate_scan(p, offsets, 200.0, 1.0, 1.0, numerics::derive_seed(4242, k));
            const FringeFit fit = fit_fringe(scan, g.period);
            if (std::abs(fit.visibility - 0.42) <= fit.visibility_sigma()) ++covered;
        }
        if (covered < 120 || covered > 150) {
            ok = false;
            why += "coverage; ";
        }
    }

    detail = fmt("unit reductions ok, sum|b|^2=%.7f, fit err=%.1e, coverage=%d/200 %s", power,
                 fit_err, covered, why.c_str());
    return ok;
}

// criterion 8 ---------------------------------------------------------------
bool clock_model(std::string& detail) {
    const double scale = constants::g_standard / (constants::c * constants::c);
    const bool red_shift_ok = std::abs(scale - 1.09e-16) / 1.09e-16 < 5e-3;

    ClockModel single;
    single.mode_frequencies = {2.0e13};
    single.height_separation = 1e-6;
    const double kappa = scale * single.height_separation;
    const double period = 2.0 * constants::pi / (single.mode_frequencies[0] * kappa);
    single.evolution_time = period;
    const double revival = clock_dephasing(single);
    const bool revival_ok = std::abs(revival - 1.0) <= 1e-9;

    ClockModel many;
    many.height_separation = 1e-6;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> freq(1.0e13, 2.0e14);
    for (int k = 0; k < 50; ++k) many.mode_frequencies.push_back(freq(rng));
    double w_min = many.mode_frequencies[0];
    for (double w : many.mode_frequencies) w_min = std::min(w_min, w);
    const double t_slow = 2.0 * constants::pi / (w_min * kappa);
    double worst = 0.0;
    for (int i = 1; i <= 20000; ++i) {
        many.evolution_time = 10.0 * t_slow * i / 20000.0;
        if (many.evolution_time < 0.01 * t_slow) continue;
        worst = std::max(worst, clock_dephasing(many));
    }
    const bool suppressed = worst < 0.99;

    detail = fmt("revival=1%+.1e, 50-mode max=%.4f, g dh/c^2 = %.4e per m", revival - 1.0,
                 worst, scale);
    return red_shift_ok && revival_ok && suppressed;
}

} // namespace

int main() {
    std::printf("talbot-sim acceptance criteria\n");
    criterion(1, "de Broglie wavelength", de_broglie_check);
    criterion(2, "collisional calibration", collisional_calibration);
    criterion(3, "thermal decoherence shape", thermal_shape);
    criterion(4, "long-wavelength regime", long_wavelength_regime);
    criterion(5, "Coriolis phase map", coriolis_phase_map);
    criterion(6, "oracle equivalence", oracle_equivalence);
    criterion(7, "property suite", property_suite);
    criterion(8, "clock model", clock_model);
    std::printf("%d of 8 criteria passed\n", 8 - g_failures);
    return g_failures;
}
