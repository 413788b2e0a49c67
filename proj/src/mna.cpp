#include "cqed/mna.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

struct Index {
    std::map<std::string, int> node;    // non-ground -> unknown index
    std::map<std::string, int> branch;  // inductor/source name -> unknown index
    int size = 0;
};

Index build_index(const Netlist& nl, MnaSystem& sys) {
    Index ix;
    for (const auto& name : nl.node_names()) {
        if (name == "0") continue;
        ix.node[name] = static_cast<int>(sys.node_names.size());
        sys.node_names.push_back(name);
    }
    const int n_nodes = static_cast<int>(sys.node_names.size());
    for (const auto& e : nl.elements()) {
        if (e.kind != ElementKind::inductor) continue;
        ix.branch[e.name] = n_nodes + static_cast<int>(sys.branch_names.size());
        sys.branch_names.push_back(e.name);
    }
    for (const auto& s : nl.sources()) {
        ix.branch[s.name] = n_nodes + static_cast<int>(sys.branch_names.size());
        sys.branch_names.push_back(s.name);
    }
    ix.size = n_nodes + static_cast<int>(sys.branch_names.size());
    return ix;
}

int node_index(const Index& ix, const std::string& name) {
    if (name == "0") return -1;
    return ix.node.at(name);
}

}  // namespace

MnaSystem assemble_mna(const Netlist& nl) {
    MnaSystem sys;
    const Index ix = build_index(nl, sys);
    const int n = ix.size;
    sys.G = Eigen::MatrixXd::Zero(n, n);
    sys.C = Eigen::MatrixXd::Zero(n, n);
    sys.rhs = Eigen::VectorXd::Zero(n);

    auto stamp_admittance = [&](Eigen::MatrixXd& m, int a, int b, double y) {
        if (a >= 0) m(a, a) += y;
        if (b >= 0) m(b, b) += y;
        if (a >= 0 && b >= 0) {
            m(a, b) -= y;
            m(b, a) -= y;
        }
    };

    for (const auto& e : nl.elements()) {
        switch (e.kind) {
            case ElementKind::resistor: {
                const int a = node_index(ix, e.node_pos);
                const int b = node_index(ix, e.node_neg);
                stamp_admittance(sys.G, a, b, 1.0 / e.value);
                break;
            }
            case ElementKind::capacitor: {
                const int a = node_index(ix, e.node_pos);
                const int b = node_index(ix, e.node_neg);
                stamp_admittance(sys.C, a, b, e.value);
                break;
            }
            case ElementKind::inductor: {
                const int a = node_index(ix, e.node_pos);
                const int b = node_index(ix, e.node_neg);
                const int br = ix.branch.at(e.name);
                // Branch current flows node_pos -> node_neg.
                if (a >= 0) {
                    sys.G(a, br) += 1.0;
                    sys.G(br, a) += 1.0;
                }
                if (b >= 0) {
                    sys.G(b, br) -= 1.0;
                    sys.G(br, b) -= 1.0;
                }
                sys.C(br, br) -= e.value;
                break;
            }
            case ElementKind::mutual: {
                const Element* la = nl.find_element(e.inductor_a);
                const Element* lb = nl.find_element(e.inductor_b);
                const double mutual = e.value * std::sqrt(std::fabs(la->value * lb->value));
                const int ba = ix.branch.at(la->name);
                const int bb = ix.branch.at(lb->name);
                sys.C(ba, bb) -= mutual;
                sys.C(bb, ba) -= mutual;
                break;
            }
        }
    }

    for (const auto& s : nl.sources()) {
        const int a = node_index(ix, s.node_pos);
        const int b = node_index(ix, s.node_neg);
        const int br = ix.branch.at(s.name);
        if (a >= 0) {
            sys.G(a, br) += 1.0;
            sys.G(br, a) += 1.0;
        }
        if (b >= 0) {
            sys.G(b, br) -= 1.0;
            sys.G(br, b) -= 1.0;
        }
        sys.G(br, br) -= s.source_r;
        sys.rhs(br) = s.amplitude;
    }
    return sys;
}

AcSolution ac_solve(const Netlist& nl, double omega) {
    if (!(omega > 0.0)) throw invalid_parameter("ac_solve requires omega > 0");
    if (nl.sources().empty()) throw invalid_parameter("ac_solve requires at least one source");

    const MnaSystem sys = assemble_mna(nl);
    const std::complex<double> jw(0.0, omega);

    Eigen::MatrixXcd a = sys.G.cast<std::complex<double>>() + jw * sys.C.cast<std::complex<double>>();
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    if (!lu.isInvertible())
        throw topology_error("singular nodal system at omega = " + std::to_string(omega) +
                             " rad/s (floating or degenerate subcircuit)");
    const Eigen::VectorXcd x = lu.solve(sys.rhs.cast<std::complex<double>>());

    AcSolution sol;
    sol.omega = omega;
    sol.node_voltages["0"] = 0.0;
    for (std::size_t k = 0; k < sys.node_names.size(); ++k)
        sol.node_voltages[sys.node_names[k]] = x(static_cast<int>(k));
    for (std::size_t k = 0; k < sys.branch_names.size(); ++k)
        sol.branch_currents[sys.branch_names[k]] =
            x(static_cast<int>(sys.node_names.size() + k));

    // Kirchhoff residual: net current leaving every non-ground node.
    std::map<std::string, std::complex<double>> net;
    for (const auto& name : sys.node_names) net[name] = 0.0;
    double max_current = 0.0;
    auto add_flow = [&](const std::string& np, const std::string& nn,
                        std::complex<double> current) {
        max_current = std::max(max_current, std::abs(current));
        if (np != "0") net[np] += current;
        if (nn != "0") net[nn] -= current;
    };
    auto voltage = [&](const std::string& node) { return sol.node_voltages.at(node); };
    for (const auto& e : nl.elements()) {
        switch (e.kind) {
            case ElementKind::resistor:
                add_flow(e.node_pos, e.node_neg, (voltage(e.node_pos) - voltage(e.node_neg)) / e.value);
                break;
            case ElementKind::capacitor:
                add_flow(e.node_pos, e.node_neg,
                         jw * e.value * (voltage(e.node_pos) - voltage(e.node_neg)));
                break;
            case ElementKind::inductor:
                add_flow(e.node_pos, e.node_neg, sol.branch_currents.at(e.name));
                break;
            case ElementKind::mutual:
                break;
        }
    }
    for (const auto& s : nl.sources())
        add_flow(s.node_pos, s.node_neg, sol.branch_currents.at(s.name));

    double worst = 0.0;
    for (const auto& [node, residual] : net) worst = std::max(worst, std::abs(residual));
    sol.kcl_residual = max_current > 0.0 ? worst / max_current : worst;
    return sol;
}

Spectrum transmission_sweep(const Netlist& nl, const std::string& port,
                            const std::vector<double>& grid_hz) {
    const Port* p = nl.find_port(port);
    if (!p) throw invalid_parameter("unknown port '" + port + "'");
    if (nl.sources().size() != 1)
        throw invalid_parameter("transmission_sweep requires exactly one source");
    const AcSource& src = nl.sources().front();
    if (src.amplitude == 0.0) throw invalid_parameter("source amplitude must be nonzero");
    if (grid_hz.empty()) throw invalid_parameter("frequency grid is empty");

    Spectrum spec;
    spec.frequencies = grid_hz;
    spec.magnitude.resize(grid_hz.size());
    spec.phase.resize(grid_hz.size());
    for (std::size_t k = 0; k < grid_hz.size(); ++k) {
        try {
            const AcSolution sol = ac_solve(nl, hz_to_rad(grid_hz[k]));
            const std::complex<double> vp =
                sol.node_voltages.at(p->node_pos) - sol.node_voltages.at(p->node_neg);
            const std::complex<double> t = vp / src.amplitude;
            spec.magnitude[k] = std::abs(t);
            spec.phase[k] = std::arg(t);
        } catch (const topology_error& e) {
            throw topology_error(std::string(e.what()) + " [grid point " +
                                 std::to_string(grid_hz[k]) + " Hz]");
        }
    }
    return spec;
}

std::vector<std::complex<double>> natural_frequencies(const Netlist& nl) {
    const MnaSystem sys = assemble_mna(nl);
    if (sys.G.rows() == 0) return {};

    // Scale s = w0 * sigma so the pencil is well conditioned at circuit scales.
    double lsum = 0.0, csum = 0.0;
    int ln = 0, cn = 0;
    for (const auto& e : nl.elements()) {
        if (e.kind == ElementKind::inductor && e.value != 0.0) {
            lsum += std::log(std::fabs(e.value));
            ++ln;
        }
        if (e.kind == ElementKind::capacitor && e.value != 0.0) {
            csum += std::log(std::fabs(e.value));
            ++cn;
        }
    }
    double w0 = 1.0;
    if (ln > 0 && cn > 0) w0 = 1.0 / std::sqrt(std::exp(lsum / ln) * std::exp(csum / cn));

    const Eigen::MatrixXd a = sys.G;
    const Eigen::MatrixXd b = -w0 * sys.C;
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(a, b, false);

    const auto& alphas = solver.alphas();
    const auto& betas = solver.betas();
    double beta_max = 0.0;
    for (int k = 0; k < betas.size(); ++k) beta_max = std::max(beta_max, std::fabs(betas(k)));

    std::vector<std::complex<double>> out;
    if (beta_max == 0.0) return out;
    for (int k = 0; k < betas.size(); ++k) {
        if (std::fabs(betas(k)) < 1e-9 * beta_max) continue;  // infinite eigenvalue
        out.push_back(w0 * alphas(k) / betas(k));
    }
    std::sort(out.begin(), out.end(),
              [](const std::complex<double>& x, const std::complex<double>& y) {
                  if (x.imag() != y.imag()) return x.imag() < y.imag();
                  return x.real() < y.real();
              });
    return out;
}

}  // namespace cqed
