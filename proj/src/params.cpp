#include "cqed/params.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

void validate(const PhysicalParams& p) {
    if (!(p.omega_r > 0.0)) throw invalid_parameter("omega_r must be > 0");
    if (!(p.omega_q > 0.0)) throw invalid_parameter("omega_q must be > 0");
    if (!(p.z0 > 0.0)) throw invalid_parameter("z0 must be > 0");
    if (!(p.g >= 0.0)) throw invalid_parameter("g must be >= 0");
    if (!(p.gamma >= 0.0)) throw invalid_parameter("gamma must be >= 0");
    if (p.t1 && !(*p.t1 > 0.0)) throw invalid_parameter("t1 must be > 0 when present");
    if (p.t2 && !(*p.t2 > 0.0)) throw invalid_parameter("t2 must be > 0 when present");
    if (!(p.lambda3_0 >= -1.0 && p.lambda3_0 <= 1.0))
        throw invalid_parameter("lambda3_0 must lie in [-1, +1]");
}

ResonatorLC derive_lc(double z0, double omega_r) {
    if (!(z0 > 0.0)) throw invalid_parameter("z0 must be > 0");
    if (!(omega_r > 0.0)) throw invalid_parameter("omega_r must be > 0");
    ResonatorLC lc;
    lc.c_r = 1.0 / (z0 * omega_r);
    lc.l_r = z0 / omega_r;
    return lc;
}

ResonatorLC derive_rms(ResonatorLC lc, double omega_r) {
    if (!(lc.c_r > 0.0) || !(lc.l_r > 0.0))
        throw invalid_parameter("derive_rms needs positive c_r and l_r");
    if (!(omega_r > 0.0)) throw invalid_parameter("omega_r must be > 0");
    lc.v_rms = std::sqrt(hbar * omega_r / (2.0 * lc.c_r));
    lc.i_rms = std::sqrt(hbar * omega_r / (2.0 * lc.l_r));
    return lc;
}

CircuitParams table1(const PhysicalParams& p, CircuitKind kind) {
    validate(p);
    if (p.lambda3_0 == 0.0)
        throw invalid_parameter("lambda3_0 = 0: circuit element values degenerate");

    const double wr = p.omega_r;
    const double wq = p.omega_q;
    const double z0 = p.z0;
    const double m = -p.lambda3_0;  // positive for the ground-state model

    CircuitParams cp;
    cp.kind = kind;
    if (kind == CircuitKind::electric) {
        cp.coupling = p.g / (wr * wq * z0);
        cp.cq = 1.0 / (z0 * wr * m) - cp.coupling;
        cp.lq = m * z0 * wr / (wq * wq);
        cp.cr = 1.0 / (z0 * wq) - cp.coupling;
        cp.lr = wq * z0 / (wr * wr);
        if (p.t2) {
            cp.rq1 = wr * *p.t2 * m * z0;
            cp.rq2 = m * z0 * wr / (*p.t2 * wq * wq);
        }
        if (p.gamma > 0.0) cp.rr = z0 * wq / p.gamma;
    } else {
        cp.coupling = p.g * z0 / (wr * wq);
        cp.lq = z0 / (wr * m) - cp.coupling;
        cp.cq = m * wr / (z0 * wq * wq);
        cp.lr = z0 / wq - cp.coupling;
        cp.cr = wq / (z0 * wr * wr);
        if (p.t2) {
            cp.rq1 = wq * wq * *p.t2 * z0 / (m * wr);
            cp.rq2 = z0 / (wr * *p.t2 * m);
        }
        if (p.gamma > 0.0) cp.rr = z0 * p.gamma / wq;
    }
    return cp;
}

std::array<double, 2> DressedModes::positive_pair() const {
    if (unstable) throw instability_error("dressed modes are complex at this operating point");
    double lo = 0.0, hi = 0.0;
    int found = 0;
    for (const auto& r : roots) {
        if (r.real() > 0.0) {
            (found == 0 ? lo : hi) = r.real();
            ++found;
        }
    }
    if (found != 2) throw instability_error("dressed modes lack two positive-frequency roots");
    if (lo > hi) std::swap(lo, hi);
    return {lo, hi};
}

std::array<double, 2> DressedModes::positive_pair_hz() const {
    auto pr = positive_pair();
    return {rad_to_hz(pr[0]), rad_to_hz(pr[1])};
}

DressedModes dressed_modes(const PhysicalParams& p) {
    validate(p);
    const double wr = p.omega_r;
    const double wq = p.omega_q;
    const double s = wq * wq + wr * wr;
    const double prod = wq * wq * wr * wr - (-p.lambda3_0) * p.g * p.g * wr * wq;

    // Biquadratic in x = w^2: x^2 - s x + prod = 0, solved in the cancellation-free
    // form; complex arithmetic covers the unstable (negative discriminant) branch.
    const std::complex<double> disc(s * s - 4.0 * prod, 0.0);
    const std::complex<double> root_disc = std::sqrt(disc);
    const std::complex<double> x_hi = 0.5 * (s + root_disc);
    const std::complex<double> x_lo =
        (std::abs(x_hi) > 0.0) ? std::complex<double>(prod) / x_hi : 0.5 * (s - root_disc);

    const std::complex<double> w_lo = std::sqrt(x_lo);
    const std::complex<double> w_hi = std::sqrt(x_hi);

    DressedModes dm;
    dm.roots = {-w_lo, w_lo, -w_hi, w_hi};
    std::sort(dm.roots.begin(), dm.roots.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  const double ma = std::abs(a.real()), mb = std::abs(b.real());
                  if (ma != mb) return ma < mb;
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    double scale = 0.0;
    for (const auto& r : dm.roots) scale = std::max(scale, std::abs(r));
    for (const auto& r : dm.roots)
        if (std::abs(r.imag()) > 1e-9 * scale) dm.unstable = true;
    return dm;
}

DispersivePull dispersive_pull(const PhysicalParams& p, double delta) {
    validate(p);
    if (!(std::abs(delta) > p.g))
        throw invalid_parameter("dispersive_pull requires |delta| > g (dispersive regime)");

    PhysicalParams q = p;
    q.omega_q = p.omega_r + delta;

    auto cavity_like = [&](double lam3) {
        q.lambda3_0 = lam3;
        const DressedModes dm = dressed_modes(q);
        const auto pr = dm.positive_pair();  // throws instability_error when complex
        return (delta > 0.0) ? pr[0] : pr[1];
    };

    DispersivePull out;
    out.pull_minus = cavity_like(-1.0) - p.omega_r;
    out.pull_plus = cavity_like(+1.0) - p.omega_r;
    out.difference = out.pull_plus - out.pull_minus;
    return out;
}

double loaded_q(double r_load, double c1, double omega_r) {
    if (!(r_load > 0.0)) throw invalid_parameter("r_load must be > 0");
    if (!(c1 > 0.0)) throw invalid_parameter("c1 must be > 0");
    if (!(omega_r > 0.0)) throw invalid_parameter("omega_r must be > 0");
    return 1.0 / (r_load * c1 * omega_r);
}

}  // namespace cqed
