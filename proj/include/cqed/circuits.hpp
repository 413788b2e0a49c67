#pragma once

#include "cqed/netlist.hpp"
#include "cqed/params.hpp"

namespace cqed {

// Probe attachment for the interaction models. The electric model couples the
// source and load to the resonator tank through c1/c2, mirroring
// build_resonator_network; the magnetic model inserts the source (with r_load
// as its internal resistance) in series with the resonator branch and takes the
// port across the shared inductor leg, so c1/c2 are unused there. Defaults are
// a deliberately weak probe: the loading shift stays well under a linewidth.
struct DriveOptions {
    bool attach = false;
    double c1 = 1e-17;       // F
    double c2 = 1e-17;       // F
    double r_load = 50.0;    // ohm, source internal and output load resistance
    double amplitude = 1.0;  // V
};

// Feedline-coupled resonator: unit-amplitude source behind r_load, c1 into the
// parallel LC tank, c2 out to a matched load; port "through" across that load.
Netlist build_resonator_network(const ResonatorLC& lc, double c1, double c2, double r_load);

// Capacitively coupled interaction model: parallel Cr/Lr/Rr resonator tank and
// a qubit tank of Cq parallel Rq1 alongside the series Lq-Rq2 branch, bridged
// by Crq. Absent resistors are omitted (lossless), as is Crq when coupling = 0.
Netlist build_electric_model(const CircuitParams& cp, const DriveOptions& drive = {});

// Inductively coupled dual: series Cr-Rr-Lr and Cq(parallel Rq1)-Rq2-Lq
// branches meeting in the shared leg Lrq of an inductor T-network.
Netlist build_magnetic_model(const CircuitParams& cp, const DriveOptions& drive = {});

}  // namespace cqed
