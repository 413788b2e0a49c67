#include "cqed/rbe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

struct Rates {
    double wq, wr, g, gamma, inv_t1, inv_t2;
};

Rates rates_of(const PhysicalParams& p) {
    return {p.omega_q, p.omega_r, p.g, p.gamma,
            p.t1 ? 1.0 / *p.t1 : 0.0, p.t2 ? 1.0 / *p.t2 : 0.0};
}

inline RbeState rhs(const RbeState& s, const Rates& r, bool linearized) {
    RbeState d;
    d.lambda1 = -r.wq * s.lambda2 - r.inv_t2 * s.lambda1;
    d.lambda2 = r.wq * s.lambda1 - r.g * s.lambda3 * s.v - r.inv_t2 * s.lambda2;
    d.lambda3 = linearized ? 0.0 : r.g * s.lambda2 * s.v - r.inv_t1 * (s.lambda3 + 1.0);
    d.v = r.wr * s.i - r.gamma * s.v;
    d.i = -r.wr * s.v - r.g * s.lambda1;
    return d;
}

constexpr double divergence_bound = 1e8;

inline bool runaway(const RbeState& s) {
    const double m = std::fabs(s.lambda1) + std::fabs(s.lambda2) + std::fabs(s.lambda3) +
                     std::fabs(s.v) + std::fabs(s.i);
    return !(m < 5.0 * divergence_bound);  // catches NaN too
}

}  // namespace

RbeState rbe_derivative(const RbeState& s, const PhysicalParams& p) {
    validate(p);
    return rhs(s, rates_of(p), false);
}

TimeSeries integrate(const RbeState& state0, const PhysicalParams& p, double dt, double t_final,
                     IntegrationMode mode, int decimation, double t0) {
    validate(p);
    if (!(dt > 0.0)) throw invalid_parameter("dt must be > 0");
    if (!(t_final > t0)) throw invalid_parameter("t_final must exceed t0");
    if (decimation < 1) throw invalid_parameter("decimation must be >= 1");
    const double wmax = std::max(p.omega_r, p.omega_q);
    if (!(dt * wmax < 0.5))
        throw step_size_error("dt * max(omega_r, omega_q) = " + std::to_string(dt * wmax) +
                              " violates the stability guard (< 0.5)");

    const Rates r = rates_of(p);
    const bool lin = mode.linearized;

    RbeState s = state0;
    if (lin) s.lambda3 = mode.lambda3_0;

    const auto n_steps = static_cast<std::int64_t>(std::floor((t_final - t0) / dt + 1e-9));

    TimeSeries ts;
    ts.dt = dt * decimation;
    ts.t0 = t0;
    ts.samples.reserve(static_cast<std::size_t>(n_steps / decimation) + 1);
    ts.samples.push_back(s);

    const double h = dt;
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const RbeState k1 = rhs(s, r, lin);
        RbeState m;
        m.lambda1 = s.lambda1 + 0.5 * h * k1.lambda1;
        m.lambda2 = s.lambda2 + 0.5 * h * k1.lambda2;
        m.lambda3 = s.lambda3 + 0.5 * h * k1.lambda3;
        m.v = s.v + 0.5 * h * k1.v;
        m.i = s.i + 0.5 * h * k1.i;
        const RbeState k2 = rhs(m, r, lin);
        m.lambda1 = s.lambda1 + 0.5 * h * k2.lambda1;
        m.lambda2 = s.lambda2 + 0.5 * h * k2.lambda2;
        m.lambda3 = s.lambda3 + 0.5 * h * k2.lambda3;
        m.v = s.v + 0.5 * h * k2.v;
        m.i = s.i + 0.5 * h * k2.i;
        const RbeState k3 = rhs(m, r, lin);
        m.lambda1 = s.lambda1 + h * k3.lambda1;
        m.lambda2 = s.lambda2 + h * k3.lambda2;
        m.lambda3 = s.lambda3 + h * k3.lambda3;
        m.v = s.v + h * k3.v;
        m.i = s.i + h * k3.i;
        const RbeState k4 = rhs(m, r, lin);

        const double w = h / 6.0;
        s.lambda1 += w * (k1.lambda1 + 2.0 * k2.lambda1 + 2.0 * k3.lambda1 + k4.lambda1);
        s.lambda2 += w * (k1.lambda2 + 2.0 * k2.lambda2 + 2.0 * k3.lambda2 + k4.lambda2);
        s.lambda3 += w * (k1.lambda3 + 2.0 * k2.lambda3 + 2.0 * k3.lambda3 + k4.lambda3);
        s.v += w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        s.i += w * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i);

        if (runaway(s)) {
            const double t = t0 + static_cast<double>(k + 1) * dt;
            throw divergence_error("state diverged at t = " + std::to_string(t) + " s", t);
        }
        if ((k + 1) % decimation == 0) ts.samples.push_back(s);
    }
    return ts;
}

double conserved_energy(const RbeState& s, const PhysicalParams& p) {
    return hbar * p.omega_r / 4.0 * (s.v * s.v + s.i * s.i) +
           hbar * p.g / 2.0 * s.lambda1 * s.v + hbar * p.omega_q / 2.0 * s.lambda3;
}

double bloch_norm(const RbeState& s) {
    return std::sqrt(s.lambda1 * s.lambda1 + s.lambda2 * s.lambda2 + s.lambda3 * s.lambda3);
}

LinearSystem linearized_matrix(const PhysicalParams& p, double lambda3_0) {
    validate(p);
    if (!(lambda3_0 >= -1.0 && lambda3_0 <= 1.0))
        throw invalid_parameter("lambda3_0 must lie in [-1, +1]");
    const Rates r = rates_of(p);
    LinearSystem sys;
    sys.lambda3_0 = lambda3_0;
    sys.a = {{{-r.inv_t2, -r.wq, 0.0, 0.0},
              {r.wq, -r.inv_t2, -r.g * lambda3_0, 0.0},
              {0.0, 0.0, -r.gamma, r.wr},
              {-r.g, 0.0, -r.wr, 0.0}}};
    return sys;
}

std::array<std::complex<double>, 4> eigenfrequencies(const LinearSystem& sys) {
    Eigen::Matrix4d a;
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) a(row, col) = sys.a[row][col];
    const Eigen::EigenSolver<Eigen::Matrix4d> solver(a);
    std::array<std::complex<double>, 4> out;
    for (int k = 0; k < 4; ++k) out[k] = solver.eigenvalues()[k];
    std::sort(out.begin(), out.end(),
              [](const std::complex<double>& x, const std::complex<double>& y) {
                  if (x.imag() != y.imag()) return x.imag() < y.imag();
                  return x.real() < y.real();
              });
    return out;
}

}  // namespace cqed
