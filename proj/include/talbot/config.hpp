#ifndef TALBOT_CONFIG_HPP
#define TALBOT_CONFIG_HPP

#include <optional>
#include <string>

#include "talbot/decoherence.hpp"
#include "talbot/phase_averaging.hpp"
#include "talbot/types.hpp"

namespace talbot {

enum class InertialMode { off, per_velocity, lumped };

/// Thermal channel settings before the entry temperature is resolved: either
/// a direct temperature or a laser power with a heating calibration.
struct ThermalSettings {
    std::optional<double> entry_temperature; // K
    std::optional<double> laser_power;       // W
    std::optional<HeatingCalibration> calibration;
    int time_steps = 256;

    double resolve_temperature() const;
    double resolve_temperature(double power) const; // sweep override
};

struct ChannelsConfig {
    std::optional<CollisionChannel> collisional;
    std::optional<ThermalSettings> thermal;
    std::optional<VibrationModel> vibration;
    InertialMode inertial = InertialMode::off;
    bool electric = false;
    std::optional<ClockModel> clock;
};

struct ScanSettings {
    double flux = 100.0;            // detected counts/s at full transmission
    double integration_time = 1.0;  // s per point
    int points = 50;
    double periods = 1.0;           // scan span in grating periods
};

struct NumericsSettings {
    int harmonics = 0;        // 0 = grow automatically until the tail test passes
    int velocity_samples = 32;
};

struct SimulationConfig {
    MoleculeSpecies molecule;
    std::optional<GasSpecies> gas;
    InterferometerConfig interferometer;
    BeamModel beam;
    ChannelsConfig channels;
    ScanSettings scan;
    NumericsSettings numerics;
};

/// Parses and validates a configuration document. Unknown keys are hard
/// errors; all unit conversions are applied; optional channels default to
/// disabled. Deterministic and side-effect free.
SimulationConfig validate_config(const std::string& toml_text);

SimulationConfig load_config(const std::string& path);

} // namespace talbot

#endif
