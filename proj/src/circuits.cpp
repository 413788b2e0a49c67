#include "cqed/circuits.hpp"

#include <string>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

void check_probe(double c1, double c2, double r_load) {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw invalid_parameter("probe coupling capacitors must be > 0");
    if (!(r_load > 0.0)) throw invalid_parameter("r_load must be > 0");
}

}  // namespace

Netlist build_resonator_network(const ResonatorLC& lc, double c1, double c2, double r_load) {
    if (!(lc.c_r > 0.0) || !(lc.l_r > 0.0))
        throw invalid_parameter("resonator network needs positive c_r and l_r");
    check_probe(c1, c2, r_load);

    Netlist nl;
    nl.add_source("Vsrc", "in", "0", 1.0, r_load);
    nl.add_capacitor("C1", "in", "res", c1);
    nl.add_capacitor("Cr", "res", "0", lc.c_r);
    nl.add_inductor("Lr", "res", "0", lc.l_r);
    nl.add_capacitor("C2", "res", "out", c2);
    nl.add_resistor("Rload", "out", "0", r_load);
    nl.add_port("through", "out", "0");
    return nl;
}

Netlist build_electric_model(const CircuitParams& cp, const DriveOptions& drive) {
    if (cp.kind != CircuitKind::electric)
        throw invalid_parameter("build_electric_model needs electric-kind parameters");

    Netlist nl;
    nl.add_capacitor("Cr", "res", "0", cp.cr);
    nl.add_inductor("Lr", "res", "0", cp.lr);
    if (cp.rr) nl.add_resistor("Rr", "res", "0", *cp.rr);

    nl.add_capacitor("Cq", "qub", "0", cp.cq);
    if (cp.rq1) nl.add_resistor("Rq1", "qub", "0", *cp.rq1);
    if (cp.rq2) {
        nl.add_inductor("Lq", "qub", "qs", cp.lq);
        nl.add_resistor("Rq2", "qs", "0", *cp.rq2);
    } else {
        nl.add_inductor("Lq", "qub", "0", cp.lq);
    }
    if (cp.coupling != 0.0) nl.add_capacitor("Crq", "res", "qub", cp.coupling);

    if (drive.attach) {
        check_probe(drive.c1, drive.c2, drive.r_load);
        nl.add_source("Vsrc", "in", "0", drive.amplitude, drive.r_load);
        nl.add_capacitor("C1", "in", "res", drive.c1);
        nl.add_capacitor("C2", "res", "out", drive.c2);
        nl.add_resistor("Rload", "out", "0", drive.r_load);
        nl.add_port("through", "out", "0");
    }
    return nl;
}

Netlist build_magnetic_model(const CircuitParams& cp, const DriveOptions& drive) {
    if (cp.kind != CircuitKind::magnetic)
        throw invalid_parameter("build_magnetic_model needs magnetic-kind parameters");
    if (drive.attach && !(drive.r_load > 0.0))
        throw invalid_parameter("r_load must be > 0");

    // With no shared leg the branches close straight to ground.
    const std::string mid = cp.coupling != 0.0 ? "mid" : "0";

    Netlist nl;
    std::string top = "0";
    if (drive.attach) {
        nl.add_source("Vsrc", "in", "0", drive.amplitude, drive.r_load);
        top = "in";
    }
    nl.add_capacitor("Cr", top, "ra", cp.cr);
    if (cp.rr) {
        nl.add_resistor("Rr", "ra", "rb", *cp.rr);
        nl.add_inductor("Lr", "rb", mid, cp.lr);
    } else {
        nl.add_inductor("Lr", "ra", mid, cp.lr);
    }

    nl.add_capacitor("Cq", "0", "qa", cp.cq);
    if (cp.rq1) nl.add_resistor("Rq1", "0", "qa", *cp.rq1);
    if (cp.rq2) {
        nl.add_resistor("Rq2", "qa", "qb", *cp.rq2);
        nl.add_inductor("Lq", "qb", mid, cp.lq);
    } else {
        nl.add_inductor("Lq", "qa", mid, cp.lq);
    }

    if (cp.coupling != 0.0) nl.add_inductor("Lrq", mid, "0", cp.coupling);
    if (drive.attach) nl.add_port("through", mid, "0");
    return nl;
}

}  // namespace cqed
