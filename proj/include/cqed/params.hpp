#pragma once

#include <array>
#include <complex>
#include <optional>

#include "cqed/constants.hpp"

namespace cqed {

// All frequencies and rates are angular (rad/s). Hz appears only at the CLI boundary.
struct PhysicalParams {
    double omega_r = 0.0;      // resonator frequency, rad/s
    double omega_q = 0.0;      // qubit frequency, rad/s
    double g = 0.0;            // coupling, rad/s
    double gamma = 0.0;        // resonator decay rate, rad/s
    std::optional<double> t1;  // relaxation time, s; absent = no relaxation
    std::optional<double> t2;  // decoherence time, s; absent = no dephasing
    double z0 = 50.0;          // resonator impedance, ohm
    double lambda3_0 = -1.0;   // inversion operating point, [-1, +1]
};

// Throws invalid_parameter naming the offending field.
void validate(const PhysicalParams& p);

struct ResonatorLC {
    double c_r = 0.0;    // F
    double l_r = 0.0;    // H
    double v_rms = 0.0;  // V; zero until derive_rms
    double i_rms = 0.0;  // A; zero until derive_rms
};

enum class CircuitKind { electric, magnetic };

// Lumped-element values for the equivalent interaction circuits. Absent resistors
// mean lossless (infinite resistance), never a sentinel number. lq/cq go negative
// for lambda3_0 > 0; that is meaningful for AC analysis.
struct CircuitParams {
    CircuitKind kind = CircuitKind::electric;
    std::optional<double> rq1;  // ohm, parallel qubit loss
    std::optional<double> rq2;  // ohm, series qubit loss
    double lq = 0.0;            // H
    double cq = 0.0;            // F
    std::optional<double> rr;   // ohm, resonator loss
    double lr = 0.0;            // H
    double cr = 0.0;            // F
    double coupling = 0.0;      // F (electric) or H (magnetic)
};

// Roots of the lossless characteristic quartic
//   (w^2 - wq^2)(w^2 - wr^2) = (-lambda3_0) g^2 wr wq
// in rad/s, in +/- conjugate pairs, sorted by |Re|. `unstable` is set when any
// root acquires an imaginary part (lambda3_0 > 0 near resonance).
struct DressedModes {
    std::array<std::complex<double>, 4> roots{};
    bool unstable = false;

    // The two positive oscillation frequencies, ascending, rad/s.
    // Throws instability_error when the modes are complex.
    std::array<double, 2> positive_pair() const;
    std::array<double, 2> positive_pair_hz() const;
};

ResonatorLC derive_lc(double z0, double omega_r);
ResonatorLC derive_rms(ResonatorLC lc, double omega_r);

CircuitParams table1(const PhysicalParams& p, CircuitKind kind);

DressedModes dressed_modes(const PhysicalParams& p);

// Cavity-like dressed frequency minus bare omega_r, for inversion -1 and +1,
// evaluated from the exact quartic roots. All rad/s.
struct DispersivePull {
    double pull_minus = 0.0;
    double pull_plus = 0.0;
    double difference = 0.0;  // pull_plus - pull_minus
};
DispersivePull dispersive_pull(const PhysicalParams& p, double delta);

double loaded_q(double r_load, double c1, double omega_r);

}  // namespace cqed
