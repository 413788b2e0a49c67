#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "cqed/params.hpp"

namespace cqed {

// Coherence vector plus normalized resonator quadratures (V/V_RMS, I/I_RMS).
struct RbeState {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double v = 0.0;
    double i = 0.0;
};

RbeState rbe_derivative(const RbeState& s, const PhysicalParams& p);

// Uniformly sampled trajectory. `dt` is the spacing between *recorded* samples,
// i.e. integration step times the decimation factor.
struct TimeSeries {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<RbeState> samples;
};

struct IntegrationMode {
    bool linearized = false;
    double lambda3_0 = -1.0;  // operating point when linearized

    static IntegrationMode full() { return {}; }
    static IntegrationMode linearized_at(double lambda3_0) { return {true, lambda3_0}; }
};

// Classic fixed-step RK4. Guard: dt * max(omega_r, omega_q) < 0.5, else
// step_size_error. Non-finite or runaway state -> divergence_error with the time.
// In linearized mode lambda3 is pinned to the operating point and its equation
// is skipped. Recorded samples are steps k = 0, decimation, 2*decimation, ...
TimeSeries integrate(const RbeState& state0, const PhysicalParams& p, double dt, double t_final,
                     IntegrationMode mode = IntegrationMode::full(), int decimation = 1,
                     double t0 = 0.0);

// Mean-field energy: hbar*wr/4 (v^2 + i^2) + hbar*g/2 lambda1 v + hbar*wq/2 lambda3.
double conserved_energy(const RbeState& s, const PhysicalParams& p);

double bloch_norm(const RbeState& s);

// Generator of the linearized dynamics over [lambda1, lambda2, v, i].
struct LinearSystem {
    std::array<std::array<double, 4>, 4> a{};
    double lambda3_0 = -1.0;
};

LinearSystem linearized_matrix(const PhysicalParams& p, double lambda3_0);

// Eigenvalues of the 4x4 generator, sorted by imaginary part (mode frequencies);
// real parts are decay rates.
std::array<std::complex<double>, 4> eigenfrequencies(const LinearSystem& sys);

}  // namespace cqed
