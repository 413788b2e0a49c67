#include "cqed/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Cuts a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '"')
            quoted = !quoted;
        else if (s[k] == '#' && !quoted)
            return s.substr(0, k);
    }
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw invalid_parameter("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& raw, int line, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size() || !std::isfinite(v))
        fail(line, "value of '" + key + "' must be a finite number");
    return v;
}

int parse_integer(const std::string& raw, int line, const std::string& key) {
    const double v = parse_number(raw, line, key);
    if (v != std::floor(v) || std::fabs(v) > 1e9)
        fail(line, "value of '" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::string parse_string(const std::string& raw, int line, const std::string& key) {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"')
        fail(line, "value of '" + key + "' must be a quoted string");
    return raw.substr(1, raw.size() - 2);
}

void check_ranges(const ScenarioConfig& cfg) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw invalid_parameter(what);
    };
    if (cfg.f_r_ghz) require(*cfg.f_r_ghz > 0.0, "f_r_ghz must be > 0");
    if (cfg.f_q_mhz) require(*cfg.f_q_mhz > 0.0, "f_q_mhz must be > 0");
    if (cfg.g_mhz) require(*cfg.g_mhz >= 0.0, "g_mhz must be >= 0");
    if (cfg.gamma_mhz) require(*cfg.gamma_mhz >= 0.0, "gamma_mhz must be >= 0");
    if (cfg.t1_us) require(*cfg.t1_us > 0.0, "t1_us must be > 0");
    if (cfg.t2_us) require(*cfg.t2_us > 0.0, "t2_us must be > 0");
    if (cfg.z0_ohm) require(*cfg.z0_ohm > 0.0, "z0_ohm must be > 0");
    if (cfg.lambda3_0)
        require(*cfg.lambda3_0 >= -1.0 && *cfg.lambda3_0 <= 1.0, "lambda3_0 must lie in [-1, +1]");

    require(cfg.dt_ps > 0.0, "dt_ps must be > 0");
    require(cfg.t_final_us > 0.0, "t_final_us must be > 0");
    require(cfg.pad_factor >= 1, "pad_factor must be >= 1");
    if (cfg.decimation) require(*cfg.decimation >= 1, "decimation must be >= 1");
    parse_window(cfg.window);
    if (cfg.f_min_ghz) require(*cfg.f_min_ghz > 0.0, "f_min_ghz must be > 0");
    if (cfg.f_max_ghz) require(*cfg.f_max_ghz > 0.0, "f_max_ghz must be > 0");
    if (cfg.f_min_ghz && cfg.f_max_ghz)
        require(*cfg.f_min_ghz < *cfg.f_max_ghz, "f_min_ghz must be < f_max_ghz");
    if (cfg.grid_points) require(*cfg.grid_points >= 2, "grid_points must be >= 2");
}

}  // namespace

Window parse_window(const std::string& name) {
    if (name == "hann") return Window::hann;
    if (name == "rectangular") return Window::rectangular;
    throw invalid_parameter("window must be \"hann\" or \"rectangular\", got \"" + name + "\"");
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    std::set<std::string> seen;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "physical" && section != "simulation" && section != "output")
                fail(line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for '" + key + "'");
        if (section.empty()) fail(line_no, "key '" + key + "' appears before any section");
        if (!seen.insert(section + "." + key).second) fail(line_no, "duplicate key '" + key + "'");

        auto num = [&] { return parse_number(value, line_no, key); };
        auto integer = [&] { return parse_integer(value, line_no, key); };
        auto str = [&] { return parse_string(value, line_no, key); };

        if (section == "physical") {
            if (key == "f_r_ghz") cfg.f_r_ghz = num();
            else if (key == "f_q_mhz") cfg.f_q_mhz = num();
            else if (key == "delta_mhz") cfg.delta_mhz = num();
            else if (key == "g_mhz") cfg.g_mhz = num();
            else if (key == "gamma_mhz") cfg.gamma_mhz = num();
            else if (key == "t1_us") cfg.t1_us = num();
            else if (key == "t2_us") cfg.t2_us = num();
            else if (key == "z0_ohm") cfg.z0_ohm = num();
            else if (key == "lambda3_0") cfg.lambda3_0 = num();
            else fail(line_no, "unknown key '" + key + "' in [physical]");
        } else if (section == "simulation") {
            if (key == "dt_ps") cfg.dt_ps = num();
            else if (key == "t_final_us") cfg.t_final_us = num();
            else if (key == "window") cfg.window = str();
            else if (key == "pad_factor") cfg.pad_factor = integer();
            else if (key == "decimation") cfg.decimation = integer();
            else if (key == "f_min_ghz") cfg.f_min_ghz = num();
            else if (key == "f_max_ghz") cfg.f_max_ghz = num();
            else if (key == "grid_points") cfg.grid_points = integer();
            else fail(line_no, "unknown key '" + key + "' in [simulation]");
        } else {
            if (key == "out") cfg.out = str();
            else fail(line_no, "unknown key '" + key + "' in [output]");
        }
    }
    check_ranges(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_parameter("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

PhysicalParams physical_from_config(const ScenarioConfig& cfg) {
    if (!cfg.f_r_ghz) throw invalid_parameter("config missing required field f_r_ghz");
    if (!cfg.g_mhz) throw invalid_parameter("config missing required field g_mhz");
    if (!cfg.gamma_mhz) throw invalid_parameter("config missing required field gamma_mhz");
    if (cfg.f_q_mhz && cfg.delta_mhz)
        throw invalid_parameter("config must set exactly one of f_q_mhz / delta_mhz, got both");
    if (!cfg.f_q_mhz && !cfg.delta_mhz)
        throw invalid_parameter("config must set exactly one of f_q_mhz / delta_mhz, got neither");

    PhysicalParams p;
    p.omega_r = hz_to_rad(*cfg.f_r_ghz * 1e9);
    p.omega_q = cfg.f_q_mhz ? hz_to_rad(*cfg.f_q_mhz * 1e6)
                            : p.omega_r + hz_to_rad(*cfg.delta_mhz * 1e6);
    p.g = hz_to_rad(*cfg.g_mhz * 1e6);
    p.gamma = hz_to_rad(*cfg.gamma_mhz * 1e6);
    if (cfg.t1_us) p.t1 = *cfg.t1_us * 1e-6;
    if (cfg.t2_us) p.t2 = *cfg.t2_us * 1e-6;
    if (cfg.z0_ohm) p.z0 = *cfg.z0_ohm;
    if (cfg.lambda3_0) p.lambda3_0 = *cfg.lambda3_0;
    validate(p);
    return p;
}

}  // namespace cqed
