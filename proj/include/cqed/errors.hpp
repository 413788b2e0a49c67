#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Bad user-facing input: parameters, config fields, malformed files.
struct invalid_parameter : std::runtime_error {
    explicit invalid_parameter(const std::string& msg) : std::runtime_error(msg) {}
};

// Integrator step violates the explicit-stability guard.
struct step_size_error : std::runtime_error {
    explicit step_size_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Trajectory left the representable range; `time` is the simulation time of detection.
struct divergence_error : std::runtime_error {
    divergence_error(const std::string& msg, double time_s)
        : std::runtime_error(msg), time(time_s) {}
    double time;
};

// Requested operating point has exponentially growing modes.
struct instability_error : std::runtime_error {
    explicit instability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Netlist text or construction problem; `line` is 1-based, 0 when not tied to a line.
struct netlist_error : std::runtime_error {
    netlist_error(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    explicit netlist_error(const std::string& msg) : std::runtime_error(msg), line(0) {}
    int line = 0;
};

// Circuit cannot be solved: singular nodal system, floating subcircuit, missing port.
struct topology_error : std::runtime_error {
    explicit topology_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A required spectral feature (peak, linewidth) could not be extracted.
struct extraction_error : std::runtime_error {
    explicit extraction_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cqed
