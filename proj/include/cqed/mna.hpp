#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqed/netlist.hpp"
#include "cqed/spectrum.hpp"

namespace cqed {

// Modified nodal analysis system in affine form A(s) = G + s*C over the unknown
// vector [node voltages..., branch currents...]; branches are inductors and
// sources. The right-hand side holds source amplitudes.
struct MnaSystem {
    std::vector<std::string> node_names;    // non-ground, index = unknown index
    std::vector<std::string> branch_names;  // after the nodes in the unknown vector
    Eigen::MatrixXd G, C;
    Eigen::VectorXd rhs;
};

MnaSystem assemble_mna(const Netlist& nl);

struct AcSolution {
    double omega = 0.0;  // rad/s
    std::map<std::string, std::complex<double>> node_voltages;    // includes ground "0"
    std::map<std::string, std::complex<double>> branch_currents;  // inductors and sources
    double kcl_residual = 0.0;  // max node current residual / max branch current
};

// Dense complex LU solve at one frequency. Throws topology_error when the nodal
// system is singular (floating subcircuit, shorted source loop, ...).
AcSolution ac_solve(const Netlist& nl, double omega);

// |V(port)/amplitude| and phase per grid point; requires exactly one source.
Spectrum transmission_sweep(const Netlist& nl, const std::string& port,
                            const std::vector<double>& grid_hz);

// Finite eigenvalues s of the pencil (G + s*C) x = 0: the network's natural
// complex frequencies in rad/s (imaginary part = oscillation, real = decay).
std::vector<std::complex<double>> natural_frequencies(const Netlist& nl);

}  // namespace cqed
