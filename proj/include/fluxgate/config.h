#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluxgate/device.h"
#include "fluxgate/noise.h"

namespace fluxgate {

enum class Workflow { spectrum, zz_sweep, cr_coefficient, cr_gate, cphase_gate, leakage_scan, yield };

std::string to_string(Workflow w);
Workflow workflow_from_string(const std::string& name);  // throws ConfigError

enum class OutputFormat { csv, json };

struct SweepConfig {
    std::string variable = "omega_t";  // omega_t (GHz) or t_offset (ns)
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    std::vector<double> values() const;
};

struct PulseConfig {
    double eps_d_mhz = 300.0;
    double t_rise_ns = 10.0;
    std::string scheme = "echo";  // echo or simple
    std::vector<double> target_phi{pi};
    bool refine_t_pulse = true;
};

struct YieldConfig {
    std::vector<int> distances{3};
    std::vector<double> sigma_grid{0.005, 0.01, 0.015, 0.02};
    std::vector<double> eps_d_mhz{100.0, 300.0, 500.0};
    int samples = 6000;
    int basis_dim = 80;
};

struct RunConfig {
    Workflow workflow = Workflow::spectrum;
    std::string fluxonium_set;  // "CR", "CPHASE" or "inline"
    FluxoniumParams fluxonium = fluxonium_cr_set();
    TransmonParams transmon;
    double jc_mhz = 20.0;
    std::optional<TransmonParams> spectator;
    double jc_spectator_mhz = 20.0;
    PulseConfig pulse;
    std::optional<NoiseModel> noise;
    std::optional<SweepConfig> sweep;
    YieldConfig yield;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: not set

    nlohmann::json resolved() const;  // every field after defaults and unit conversion
};

// Quantities are plain numbers in the field's default unit (GHz, MHz, ns, mK)
// or strings with a unit, e.g. "5.3 GHz", "300 MHz", "20 mK". Errors name
// the JSON path of the offending field, or the line for syntax errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Converts "<number> <unit>" to the given default unit.
double parse_quantity(const nlohmann::json& value, const std::string& default_unit, const std::string& path);

} // namespace fluxgate
