#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "talbot/beam.hpp"
#include "talbot/channels.hpp"
#include "talbot/config.hpp"
#include "talbot/fresnel.hpp"
#include "talbot/scan.hpp"

namespace {

using nlohmann::json;
using namespace talbot;

struct Options {
    std::string config_path;
    std::string out_path;
    bool json_output = false;
    std::uint64_t seed = 1;
    std::string grid_spec;
    std::string kind = "pressure";
    int oracle_spp = 128;
    int oracle_periods = 32;
    int oracle_sources = 128;
};

std::vector<double> parse_grid(const std::string& spec) {
    // start:stop:count, inclusive linear grid
    const auto a = spec.find(':');
    const auto b = spec.rfind(':');
    if (a == std::string::npos || b == a)
        throw ConfigError("--grid expects start:stop:count");
    const double start = std::stod(spec.substr(0, a));
    const double stop = std::stod(spec.substr(a + 1, b - a - 1));
    const int count = std::stoi(spec.substr(b + 1));
    if (count < 1) throw ConfigError("--grid count must be >= 1");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            count == 1 ? start : start + (stop - start) * i / (count - 1);
    return grid;
}

std::ostream& open_output(const Options& opt, std::ofstream& file) {
    if (opt.out_path.empty()) return std::cout;
    file.open(opt.out_path);
    if (!file) throw ConfigError("cannot open output file: " + opt.out_path);
    return file;
}

int cmd_validate(const Options& opt) {
    const SimulationConfig cfg = load_config(opt.config_path);
    const double v0 = cfg.beam.v0;
    const double lambda = de_broglie_wavelength(cfg.molecule, v0);
    const double lt = talbot_length(cfg.interferometer.period(), lambda);
    const double sigma_v = thermal_velocity_sigma(cfg.beam, cfg.molecule);
    const double lc = coherence_length(lambda, v0, std::max(sigma_v, 1e-30));

    std::ofstream file;
    std::ostream& os = open_output(opt, file);
    if (opt.json_output) {
        json j;
        j["molecule"] = cfg.molecule.name.empty() ? "(unnamed)" : cfg.molecule.name;
        j["mass_kg"] = cfg.molecule.mass;
        j["mass_da"] = mass_in_da(cfg.molecule.mass);
        j["v0_m_per_s"] = v0;
        j["de_broglie_wavelength_m"] = lambda;
        j["talbot_length_m"] = lt;
        j["separation_over_talbot_length"] = cfg.interferometer.separation / lt;
        j["coherence_length_m"] = lc;
        j["velocity_window_m_per_s"] = {cfg.beam.v_min, cfg.beam.v_max};
        os << j.dump(2) << '\n';
        return 0;
    }
    os << "config              ok\n";
    os << "molecule            " << (cfg.molecule.name.empty() ? "(unnamed)" : cfg.molecule.name)
       << "  (" << format_double(mass_in_da(cfg.molecule.mass)) << " Da)\n";
    os << "v0                  " << format_double(v0) << " m/s\n";
    os << "de Broglie          " << format_double(lambda) << " m\n";
    os << "Talbot length       " << format_double(lt) << " m\n";
    os << "L / L_T             " << format_double(cfg.interferometer.separation / lt) << "\n";
    os << "coherence length    " << format_double(lc) << " m\n";
    os << "velocity window     [" << format_double(cfg.beam.v_min) << ", "
       << format_double(cfg.beam.v_max) << "] m/s\n";
    return 0;
}

int cmd_scan(const Options& opt) {
    const SimulationConfig cfg = load_config(opt.config_path);
    const PatternResult res = compute_pattern(cfg);
    const FringePattern normalized = res.pattern.normalized();

    std::vector<double> offsets(static_cast<std::size_t>(cfg.scan.points));
    const double span = cfg.scan.periods * cfg.interferometer.period();
    for (int i = 0; i < cfg.scan.points; ++i)
        offsets[static_cast<std::size_t>(i)] = span * i / cfg.scan.points;

    const ScanResult scan = simulate_scan(normalized, offsets, cfg.scan.flux,
                                          cfg.scan.integration_time, res.survival, opt.seed);
    const FringeFit fit = fit_fringe(scan, cfg.interferometer.period());

    std::ofstream file;
    std::ostream& os = open_output(opt, file);
    if (opt.json_output) {
        json j;
        j["offsets_m"] = scan.offsets;
        j["counts"] = scan.counts;
        j["integration_time_s"] = scan.integration_time;
        j["fit"] = {{"visibility", fit.visibility},
                    {"visibility_sigma", fit.visibility_sigma()},
                    {"phase_rad", fit.phase},
                    {"mean_rate_hz", fit.mean_rate},
                    {"chi2_reduced", fit.chi2_reduced}};
        j["model"] = {{"visibility", res.pattern.visibility()},
                      {"phase_rad", res.pattern.phase()},
                      {"survival", res.survival}};
        os << j.dump(2) << '\n';
        return 0;
    }
    write_scan_csv(os, scan);
    std::cerr << "fit: V = " << format_double(fit.visibility) << " +- "
              << format_double(fit.visibility_sigma()) << ", phase = "
              << format_double(fit.phase) << " rad, rate = " << format_double(fit.mean_rate)
              << " Hz (model V = " << format_double(res.pattern.visibility()) << ")\n";
    return 0;
}

int cmd_sweep(const Options& opt) {
    const SimulationConfig cfg = load_config(opt.config_path);
    if (opt.grid_spec.empty()) throw ConfigError("sweep requires --grid start:stop:count");
    const SweepKind kind = sweep_kind_from_name(opt.kind);
    const std::vector<double> grid = parse_grid(opt.grid_spec);
    const std::vector<SweepRow> rows = run_sweep(kind, cfg, grid);

    std::ofstream file;
    std::ostream& os = open_output(opt, file);
    if (opt.json_output) {
        json j;
        j["kind"] = opt.kind;
        j["grid_column"] = sweep_grid_column(kind);
        json jr = json::array();
        for (const auto& row : rows)
            jr.push_back({{"grid", row.grid},
                          {"visibility", row.visibility},
                          {"phase_rad", row.phase},
                          {"rate_hz", row.rate}});
        j["rows"] = jr;
        os << j.dump(2) << '\n';
        return 0;
    }
    write_sweep_csv(os, kind, rows);
    return 0;
}

int cmd_oracle_check(const Options& opt) {
    const SimulationConfig cfg = load_config(opt.config_path);
    OracleGrid grid;
    grid.samples_per_period = opt.oracle_spp;
    grid.n_periods = opt.oracle_periods;
    grid.n_source_points = opt.oracle_sources;

    const double v = cfg.beam.v0;
    const FringePattern analytic =
        PatternEvaluator(cfg).evaluate_at(v, {}).pattern;
    const FringePattern oracle =
        oracle_pattern(cfg.interferometer, cfg.molecule, v, grid, 4, 64);

    const double va = analytic.visibility();
    const double vo = oracle.visibility();
    const double dv = va - vo;
    double dphase = std::remainder(analytic.phase() - oracle.phase(), 2.0 * constants::pi);
    const bool ok = std::abs(dv) <= 0.02;

    std::ofstream file;
    std::ostream& os = open_output(opt, file);
    if (opt.json_output) {
        json j;
        j["v_m_per_s"] = v;
        j["visibility_analytic"] = va;
        j["visibility_oracle"] = vo;
        j["visibility_difference"] = dv;
        j["phase_analytic_rad"] = analytic.phase();
        j["phase_oracle_rad"] = oracle.phase();
        j["phase_difference_rad"] = dphase;
        j["pass"] = ok;
        os << j.dump(2) << '\n';
    } else {
        os << "velocity            " << format_double(v) << " m/s\n";
        os << "analytic visibility " << format_double(va) << "\n";
        os << "oracle visibility   " << format_double(vo) << "\n";
        os << "difference          " << format_double(dv) << "\n";
        os << "analytic phase      " << format_double(analytic.phase()) << " rad\n";
        os << "oracle phase        " << format_double(oracle.phase()) << " rad\n";
        os << "phase difference    " << format_double(dphase) << " rad\n";
        os << (ok ? "PASS" : "FAIL") << " (|dV| threshold 0.02)\n";
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-field Talbot-Lau molecule interferometry simulator"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config_path, "TOML configuration file")
            ->required();
        sub->add_option("--out", opt.out_path, "write output to a file instead of stdout");
        sub->add_flag("--json", opt.json_output, "emit JSON instead of CSV/text");
    };

    CLI::App* validate = app.add_subcommand("validate", "parse and check a configuration");
    add_common(validate);

    CLI::App* scan = app.add_subcommand("scan", "simulate one noisy third-grating scan");
    add_common(scan);
    scan->add_option("--seed", opt.seed, "RNG seed for the counting noise");

    CLI::App* sweep = app.add_subcommand("sweep", "noiseless model curve over a parameter grid");
    add_common(sweep);
    sweep->add_option("--kind", opt.kind,
                      "pressure | heating | coriolis_map | velocity_spread");
    sweep->add_option("--grid", opt.grid_spec, "start:stop:count (inclusive)")->required();

    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "compare the analytic visibility against the wave-propagation oracle");
    add_common(oracle);
    oracle->add_option("--oracle-spp", opt.oracle_spp, "grid samples per grating period");
    oracle->add_option("--oracle-periods", opt.oracle_periods, "grating periods in the window");
    oracle->add_option("--oracle-sources", opt.oracle_sources, "incoherent source points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (scan->parsed()) return cmd_scan(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (oracle->parsed()) return cmd_oracle_check(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
