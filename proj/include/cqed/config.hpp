#pragma once

#include <optional>
#include <string>

#include "cqed/params.hpp"
#include "cqed/spectrum.hpp"

namespace cqed {

// Flat TOML scenario file: [physical], [simulation], [output] tables holding
// scalar key = value entries, "#" comments. Unknown sections or keys,
// duplicates, and out-of-range values are rejected naming the offender.
// Frequencies are ordinary (non-angular) in the unit the key name states.
struct ScenarioConfig {
    // [physical]
    std::optional<double> f_r_ghz;
    std::optional<double> f_q_mhz;    // exclusive with delta_mhz
    std::optional<double> delta_mhz;  // f_q = f_r + delta
    std::optional<double> g_mhz;
    std::optional<double> gamma_mhz;
    std::optional<double> t1_us;
    std::optional<double> t2_us;
    std::optional<double> z0_ohm;
    std::optional<double> lambda3_0;

    // [simulation]
    double dt_ps = 1.0;
    double t_final_us = 4.0;
    std::string window = "hann";
    int pad_factor = 4;
    std::optional<int> decimation;    // absent: command-specific default
    std::optional<double> f_min_ghz;  // AC sweep bounds
    std::optional<double> f_max_ghz;
    std::optional<int> grid_points;

    // [output]
    std::optional<std::string> out;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Angular-unit conversion. Requires f_r_ghz, g_mhz, gamma_mhz and exactly one
// of f_q_mhz / delta_mhz; throws invalid_parameter naming the field.
PhysicalParams physical_from_config(const ScenarioConfig& cfg);

Window parse_window(const std::string& name);  // "hann" | "rectangular"

}  // namespace cqed
