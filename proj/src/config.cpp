#include "talbot/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "talbot/beam.hpp"
#include "talbot/toml.hpp"

namespace talbot {

namespace {

/// Tracks which keys of a table were consumed so leftovers (typos) can be
/// rejected with their full path.
class StrictView {
public:
    StrictView(const toml::Table& table, std::string path)
        : table_(table), path_(std::move(path)) {}

    bool has(const std::string& key) const { return table_.has_value(key); }

    const toml::Value& require(const std::string& key) {
        if (!table_.has_value(key))
            throw ConfigError(path_ + ": missing mandatory key '" + key + "'");
        seen_.insert(key);
        return table_.values.at(key);
    }

    const toml::Value* get(const std::string& key) {
        if (!table_.has_value(key)) return nullptr;
        seen_.insert(key);
        return &table_.values.at(key);
    }

    double number(const std::string& key) { return as_number(require(key), key); }

    double number_or(const std::string& key, double fallback) {
        const toml::Value* v = get(key);
        return v ? as_number(*v, key) : fallback;
    }

    long long integer(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::number || !v.is_integer)
            throw ConfigError(path_ + "." + key + ": expected an integer");
        return static_cast<long long>(v.number);
    }

    long long integer_or(const std::string& key, long long fallback) {
        if (!has(key)) return fallback;
        return integer(key);
    }

    bool boolean_or(const std::string& key, bool fallback) {
        const toml::Value* v = get(key);
        if (!v) return fallback;
        if (v->kind != toml::Value::Kind::boolean)
            throw ConfigError(path_ + "." + key + ": expected true or false");
        return v->boolean;
    }

    std::string string_or(const std::string& key, const std::string& fallback) {
        const toml::Value* v = get(key);
        if (!v) return fallback;
        if (v->kind != toml::Value::Kind::string)
            throw ConfigError(path_ + "." + key + ": expected a string");
        return v->str;
    }

    std::vector<double> number_array(const std::string& key) {
        const toml::Value& v = require(key);
        if (v.kind != toml::Value::Kind::array)
            throw ConfigError(path_ + "." + key + ": expected an array");
        std::vector<double> out;
        out.reserve(v.array.size());
        for (const auto& e : v.array) out.push_back(as_number(e, key));
        return out;
    }

    const toml::Table* subtable(const std::string& key) {
        if (!table_.has_table(key)) return nullptr;
        seen_tables_.insert(key);
        return &table_.subtables.at(key);
    }

    /// Rejects any key or subtable that was never consumed.
    void finish() const {
        for (const auto& [key, value] : table_.values)
            if (!seen_.count(key))
                throw ConfigError(path_ + ": unknown key '" + key + "'");
        for (const auto& [key, sub] : table_.subtables)
            if (!seen_tables_.count(key))
                throw ConfigError(path_ + ": unknown table '" + key + "'");
    }

    const std::string& path() const { return path_; }

private:
    double as_number(const toml::Value& v, const std::string& key) const {
        if (v.kind != toml::Value::Kind::number)
            throw ConfigError(path_ + "." + key + ": expected a number");
        return v.number;
    }

    const toml::Table& table_;
    std::string path_;
    std::set<std::string> seen_;
    std::set<std::string> seen_tables_;
};

MoleculeSpecies parse_molecule(const toml::Table& t) {
    StrictView v(t, "molecule");
    MoleculeSpecies mol;
    mol.name = v.string_or("name", "");

    const bool has_da = v.has("mass_da");
    const bool has_kg = v.has("mass_kg");
    if (has_da == has_kg)
        throw ConfigError("molecule: exactly one of mass_da or mass_kg is required");
    mol.mass = has_da ? convert_mass(v.number("mass_da"), MassUnit::Da)
                      : convert_mass(v.number("mass_kg"), MassUnit::kg);

    if (v.has("alpha_volume_A3") && v.has("alpha_si_C_m2_per_V"))
        throw ConfigError("molecule: give alpha_volume_A3 or alpha_si_C_m2_per_V, not both");
    if (v.has("alpha_volume_A3"))
        mol.alpha_stat = polarizability_volume_to_si(v.number("alpha_volume_A3"));
    else
        mol.alpha_stat = v.number_or("alpha_si_C_m2_per_V", 0.0);

    mol.dipole_sq_mean = v.number_or("dipole_sq_debye2", 0.0);
    mol.n_atoms = static_cast<int>(v.integer("n_atoms"));
    mol.internal_temperature = v.number_or("internal_temperature_K", 0.0);
    mol.einstein_temperature = v.number_or("einstein_temperature_K", 0.0);
    v.finish();
    return mol;
}

GasSpecies parse_gas(const toml::Table& t) {
    StrictView v(t, "gas");
    GasSpecies gas;
    gas.mass = convert_mass(v.number("mass_da"), MassUnit::Da);
    gas.temperature = v.number("temperature_K");
    // effective_cross_section arrives from channels.collisional.sigma_eff_nm2.
    v.finish();
    return gas;
}

Grating parse_grating(const toml::Table& t, const std::string& path, double period) {
    StrictView v(t, path);
    Grating g;
    g.period = period;
    const std::string kind = v.string_or("kind", "material");
    if (kind == "material") {
        g.kind = GratingKind::material;
        g.open_fraction = v.number("open_fraction");
        g.thickness = v.number_or("thickness_nm", 0.0) * 1e-9;
        // No default for the Casimir-Polder strength: it is an instrument
        // calibration input.
        g.c3 = v.number("c3_J_m3");
        g.c4 = v.number_or("c4_J_m4", 0.0);
        g.wall_cutoff = v.number_or("wall_cutoff_nm", 1.0) * 1e-9;
    } else if (kind == "optical_phase") {
        g.kind = GratingKind::optical_phase;
        g.phase_amplitude = v.number("phase_amplitude_rad");
    } else {
        throw ConfigError(path + ".kind: expected 'material' or 'optical_phase'");
    }
    v.finish();
    g.check(path);
    return g;
}

InterferometerConfig parse_interferometer(const toml::Table& t) {
    StrictView v(t, "interferometer");
    InterferometerConfig cfg;
    const double period = v.number("period_nm") * 1e-9;
    cfg.separation = v.number("separation_mm") * 1e-3;
    if (v.has("grating_offsets_nm")) {
        const auto offs = v.number_array("grating_offsets_nm");
        if (offs.size() != 3)
            throw ConfigError("interferometer.grating_offsets_nm: expected three entries");
        for (int i = 0; i < 3; ++i)
            cfg.grating_offsets[static_cast<std::size_t>(i)] =
                offs[static_cast<std::size_t>(i)] * 1e-9;
    }
    cfg.rotation_rate = v.number_or("rotation_rate_rad_s", 0.0);
    cfg.gravity_accel = v.number_or("gravity_accel_m_s2", 0.0);
    cfg.electric_field_term = v.number_or("electric_field_term_V2_m3", 0.0);

    const char* names[3] = {"g1", "g2", "g3"};
    for (int i = 0; i < 3; ++i) {
        const toml::Table* sub = v.subtable(names[i]);
        if (!sub)
            throw ConfigError(std::string("interferometer: missing table '") + names[i] + "'");
        cfg.gratings[static_cast<std::size_t>(i)] =
            parse_grating(*sub, std::string("interferometer.") + names[i], period);
    }
    v.finish();
    cfg.check();
    return cfg;
}

BeamModel parse_beam(const toml::Table& t, const MoleculeSpecies& mol) {
    StrictView v(t, "beam");
    BeamModel beam;
    beam.v0 = v.number("v0_m_per_s");
    beam.source_temperature = v.number("source_temperature_K");
    beam.collimation_half_angle = v.number_or("collimation_half_angle_rad", 1e-5);
    const bool has_min = v.has("v_min_m_per_s");
    const bool has_max = v.has("v_max_m_per_s");
    if (has_min != has_max)
        throw ConfigError("beam: give both v_min_m_per_s and v_max_m_per_s or neither");
    if (has_min) {
        beam.v_min = v.number("v_min_m_per_s");
        beam.v_max = v.number("v_max_m_per_s");
    } else {
        if (!(beam.source_temperature > 0.0))
            throw ConfigError("beam.source_temperature_K: must be > 0");
        apply_default_window(beam, mol);
    }
    v.finish();
    beam.check();
    return beam;
}

HeatingCalibration parse_heating_calibration(const toml::Table& t, const std::string& path) {
    StrictView v(t, path);
    HeatingCalibration cal;
    const auto powers = v.number_array("power_W");
    const auto temps = v.number_array("temperature_K");
    if (powers.size() != temps.size())
        throw ConfigError(path + ": power_W and temperature_K must have equal length");
    for (std::size_t i = 0; i < powers.size(); ++i)
        cal.table.emplace_back(powers[i], temps[i]);
    v.finish();
    cal.check();
    return cal;
}

ChannelsConfig parse_channels(const toml::Table& t, SimulationConfig& cfg) {
    StrictView v(t, "channels");
    ChannelsConfig out;

    if (const toml::Table* sub = v.subtable("collisional")) {
        StrictView c(*sub, "channels.collisional");
        const bool enabled = c.boolean_or("enabled", true);
        const double pressure = c.number("pressure_mbar") * 100.0; // mbar -> Pa
        const double sigma = c.number("sigma_eff_nm2") * 1e-18;
        const double path = c.number("path_length_m");
        c.finish();
        if (enabled) {
            if (!cfg.gas)
                throw ConfigError("channels.collisional: requires a [gas] table");
            CollisionChannel ch;
            ch.gas = *cfg.gas;
            ch.gas.effective_cross_section = sigma;
            ch.pressure = pressure;
            ch.path_length = path;
            ch.check();
            cfg.gas->effective_cross_section = sigma;
            out.collisional = ch;
        }
    }

    if (const toml::Table* sub = v.subtable("thermal")) {
        StrictView c(*sub, "channels.thermal");
        const bool enabled = c.boolean_or("enabled", true);
        ThermalSettings ts;
        if (c.has("T0_K")) ts.entry_temperature = c.number("T0_K");
        if (c.has("laser_power_W")) ts.laser_power = c.number("laser_power_W");
        const double sigma_abs = c.number("sigma_abs_nm2") * 1e-18;
        ts.time_steps = static_cast<int>(c.integer_or("time_steps", 256));
        if (const toml::Table* cal = c.subtable("heating_calibration"))
            ts.calibration =
                parse_heating_calibration(*cal, "channels.thermal.heating_calibration");
        c.finish();
        if (enabled) {
            if (ts.entry_temperature && ts.laser_power)
                throw ConfigError("channels.thermal: give T0_K or laser_power_W, not both");
            if (!ts.entry_temperature && !ts.laser_power)
                throw ConfigError("channels.thermal: one of T0_K or laser_power_W is required");
            if (ts.laser_power && !ts.calibration)
                throw ConfigError(
                    "channels.thermal: laser_power_W requires a heating_calibration table");
            if (ts.time_steps < 16)
                throw ConfigError("channels.thermal.time_steps: must be >= 16");
            if (!(cfg.molecule.einstein_temperature > 0.0))
                throw ConfigError(
                    "molecule.einstein_temperature_K: must be > 0 for the thermal channel");
            cfg.molecule.absorption_cross_section = sigma_abs;
            if (!(sigma_abs > 0.0))
                throw ConfigError("channels.thermal.sigma_abs_nm2: must be > 0");
            out.thermal = ts;
        }
    }

    if (const toml::Table* sub = v.subtable("vibration")) {
        StrictView c(*sub, "channels.vibration");
        const bool enabled = c.boolean_or("enabled", true);
        const auto sig = c.number_array("sigma_x_nm");
        c.finish();
        if (enabled) {
            if (sig.size() != 3)
                throw ConfigError("channels.vibration.sigma_x_nm: expected three entries");
            VibrationModel vib;
            for (int i = 0; i < 3; ++i)
                vib.sigma_x[static_cast<std::size_t>(i)] = sig[static_cast<std::size_t>(i)] * 1e-9;
            vib.check();
            out.vibration = vib;
        }
    }

    if (const toml::Table* sub = v.subtable("inertial")) {
        StrictView c(*sub, "channels.inertial");
        const bool enabled = c.boolean_or("enabled", true);
        const std::string mode = c.string_or("mode", "per_velocity");
        c.finish();
        if (enabled) {
            if (mode == "per_velocity")
                out.inertial = InertialMode::per_velocity;
            else if (mode == "lumped")
                out.inertial = InertialMode::lumped;
            else
                throw ConfigError("channels.inertial.mode: expected 'per_velocity' or 'lumped'");
        }
    }

    if (const toml::Table* sub = v.subtable("electric")) {
        StrictView c(*sub, "channels.electric");
        out.electric = c.boolean_or("enabled", true);
        c.finish();
        if (out.electric && cfg.molecule.dipole_sq_mean > 0.0 &&
            !(cfg.molecule.internal_temperature > 0.0))
            throw ConfigError(
                "channels.electric: fluctuating dipole requires molecule.internal_temperature_K "
                "> 0");
    }

    if (const toml::Table* sub = v.subtable("clock")) {
        StrictView c(*sub, "channels.clock");
        const bool enabled = c.boolean_or("enabled", true);
        ClockModel clock;
        const auto freqs = c.number_array("mode_frequencies_rad_s");
        clock.mode_frequencies = freqs;
        clock.height_separation = c.number("height_separation_m");
        clock.evolution_time = c.number("evolution_time_s");
        c.finish();
        if (enabled) {
            clock.check();
            out.clock = clock;
        }
    }

    v.finish();
    return out;
}

ScanSettings parse_scan(const toml::Table& t) {
    StrictView v(t, "scan");
    ScanSettings s;
    s.flux = v.number_or("flux_hz", s.flux);
    s.integration_time = v.number_or("integration_time_s", s.integration_time);
    s.points = static_cast<int>(v.integer_or("points", s.points));
    s.periods = v.number_or("periods", s.periods);
    v.finish();
    if (!(s.flux > 0.0)) throw ConfigError("scan.flux_hz: must be > 0");
    if (!(s.integration_time > 0.0)) throw ConfigError("scan.integration_time_s: must be > 0");
    if (s.points < 8) throw ConfigError("scan.points: must be >= 8");
    if (!(s.periods >= 1.0)) throw ConfigError("scan.periods: must be >= 1");
    return s;
}

NumericsSettings parse_numerics(const toml::Table& t) {
    StrictView v(t, "numerics");
    NumericsSettings n;
    n.harmonics = static_cast<int>(v.integer_or("harmonics", 0));
    n.velocity_samples = static_cast<int>(v.integer_or("velocity_samples", 32));
    v.finish();
    if (n.harmonics < 0) throw ConfigError("numerics.harmonics: must be >= 0");
    if (n.velocity_samples < 1) throw ConfigError("numerics.velocity_samples: must be >= 1");
    return n;
}

} // namespace

double ThermalSettings::resolve_temperature() const {
    if (entry_temperature) return *entry_temperature;
    if (laser_power && calibration) return heating_to_temperature(*calibration, *laser_power);
    throw ConfigError("channels.thermal: no entry temperature available");
}

double ThermalSettings::resolve_temperature(double power) const {
    if (!calibration)
        throw ConfigError("channels.thermal: heating sweep requires a heating_calibration");
    return heating_to_temperature(*calibration, power);
}

SimulationConfig validate_config(const std::string& toml_text) {
    const toml::Table root = toml::parse(toml_text);
    StrictView v(root, "config");

    SimulationConfig cfg;

    const toml::Table* mol = v.subtable("molecule");
    if (!mol) throw ConfigError("config: missing [molecule] table");
    cfg.molecule = parse_molecule(*mol);

    if (const toml::Table* gas = v.subtable("gas")) cfg.gas = parse_gas(*gas);

    const toml::Table* itf = v.subtable("interferometer");
    if (!itf) throw ConfigError("config: missing [interferometer] table");
    cfg.interferometer = parse_interferometer(*itf);

    const toml::Table* beam = v.subtable("beam");
    if (!beam) throw ConfigError("config: missing [beam] table");
    cfg.beam = parse_beam(*beam, cfg.molecule);

    if (const toml::Table* ch = v.subtable("channels"))
        cfg.channels = parse_channels(*ch, cfg);

    if (const toml::Table* sc = v.subtable("scan")) cfg.scan = parse_scan(*sc);
    if (const toml::Table* nm = v.subtable("numerics")) cfg.numerics = parse_numerics(*nm);

    v.finish();
    cfg.molecule.check();
    if (cfg.gas && cfg.channels.collisional) cfg.gas->check();
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return validate_config(ss.str());
}

} // namespace talbot
