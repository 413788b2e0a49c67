#include <doctest.h>

#include <cmath>
#include <vector>

#include "cqed/circuits.hpp"
#include "cqed/errors.hpp"
#include "cqed/mna.hpp"
#include "cqed/params.hpp"
#include "cqed/spectrum.hpp"
#include "test_util.hpp"

using namespace cqed;
using test_util::device;
using test_util::lossless;
using test_util::rel;

namespace {

std::vector<double> grid_around(double center_hz, double half_span_hz, double step_hz) {
    std::vector<double> g;
    for (double f = center_hz - half_span_hz; f <= center_hz + half_span_hz; f += step_hz)
        g.push_back(f);
    return g;
}

// Positive oscillation frequencies (Hz) of an undriven network, ascending.
std::vector<double> positive_modes_hz(const Netlist& nl) {
    std::vector<double> out;
    for (const auto& s : natural_frequencies(nl))
        if (s.imag() > 0.0) out.push_back(rad_to_hz(s.imag()));
    return out;
}

}  // namespace

TEST_CASE("feedline-coupled tank: loading shift and quality factor") {
    const PhysicalParams p = device();
    const ResonatorLC lc = derive_lc(p.z0, p.omega_r);
    const double c1 = 1e-15, r_load = 50.0;

    const Netlist nl = build_resonator_network(lc, c1, c1, r_load);
    CHECK(nl.find_port("through") != nullptr);
    REQUIRE(nl.sources().size() == 1);

    // Outcoupling capacitors load the tank; the peak sits at the shifted
    // resonance, not the bare one.
    const double f_loaded = 1.0 / (two_pi * std::sqrt(lc.l_r * (lc.c_r + 2.0 * c1)));
    const Spectrum sp =
        transmission_sweep(nl, "through", grid_around(f_loaded, 0.6e6, 2e3));
    const PeakSet peaks = find_peaks(sp, 0.2);
    REQUIRE(peaks.peaks.size() == 1);
    CHECK(std::abs(peaks.peaks[0].center_hz - f_loaded) < 0.2e6);

    // The series R-C probes transform to a parallel load 1/(w^2 C1^2 R) per
    // side, which sets the loaded quality factor.
    const double q_num = peaks.peaks[0].center_hz / peaks.peaks[0].fwhm_hz;
    const double q_transform =
        1.0 / (2.0 * p.z0 * p.omega_r * p.omega_r * c1 * c1 * r_load);
    CHECK(rel(q_num, q_transform) < 0.05);

    CHECK_THROWS_AS(build_resonator_network(ResonatorLC{}, c1, c1, r_load), invalid_parameter);
    CHECK_THROWS_AS(build_resonator_network(lc, -1e-15, c1, r_load), invalid_parameter);
}

TEST_CASE("stronger outcoupling lowers both peak and quality factor") {
    const ResonatorLC lc = derive_lc(50.0, hz_to_rad(6.44e9));
    auto peak_of = [&](double c1) {
        const double f_loaded = 1.0 / (two_pi * std::sqrt(lc.l_r * (lc.c_r + 2.0 * c1)));
        const Netlist nl = build_resonator_network(lc, c1, c1, 50.0);
        const Spectrum sp =
            transmission_sweep(nl, "through", grid_around(f_loaded, 30e6, 50e3));
        const PeakSet peaks = find_peaks(sp, 0.2);
        REQUIRE(peaks.peaks.size() == 1);
        return peaks.peaks[0];
    };
    const Peak weak = peak_of(1e-15);
    const Peak strong = peak_of(5e-15);
    CHECK(strong.center_hz < weak.center_hz);
    CHECK(strong.center_hz / strong.fwhm_hz < weak.center_hz / weak.fwhm_hz);
}

TEST_CASE("undriven interaction models reproduce the dressed pair") {
    for (double delta : {0.0, 350e6, -600e6}) {
        CAPTURE(delta);
        const PhysicalParams p = lossless(delta);
        const auto expected = dressed_modes(p).positive_pair_hz();

        const auto electric = positive_modes_hz(build_electric_model(table1(p, CircuitKind::electric)));
        REQUIRE(electric.size() == 2);
        CHECK(rel(electric[0], expected[0]) < 1e-3);
        CHECK(rel(electric[1], expected[1]) < 1e-3);

        const auto magnetic = positive_modes_hz(build_magnetic_model(table1(p, CircuitKind::magnetic)));
        REQUIRE(magnetic.size() == 2);
        CHECK(rel(magnetic[0], expected[0]) < 1e-3);
        CHECK(rel(magnetic[1], expected[1]) < 1e-3);

        // The two realizations share one characteristic polynomial.
        CHECK(rel(electric[0], magnetic[0]) < 1e-6);
        CHECK(rel(electric[1], magnetic[1]) < 1e-6);
    }
}

TEST_CASE("decoupled models fall back to the bare frequencies") {
    PhysicalParams p = lossless(500e6);
    p.g = 0.0;

    const auto electric = positive_modes_hz(build_electric_model(table1(p, CircuitKind::electric)));
    REQUIRE(electric.size() == 2);
    CHECK(rel(electric[0], 6.44e9) < 1e-9);
    CHECK(rel(electric[1], 6.94e9) < 1e-9);

    const auto magnetic = positive_modes_hz(build_magnetic_model(table1(p, CircuitKind::magnetic)));
    REQUIRE(magnetic.size() == 2);
    CHECK(rel(magnetic[0], 6.44e9) < 1e-9);
    CHECK(rel(magnetic[1], 6.94e9) < 1e-9);
}

TEST_CASE("decoupled driven tank shows one line at the bare resonance") {
    // t2 stays set: it damps the disconnected qubit island, which would
    // otherwise make the nodal system singular right at its resonance.
    PhysicalParams p = device();
    p.g = 0.0;
    DriveOptions drive;
    drive.attach = true;
    const Netlist nl = build_electric_model(table1(p, CircuitKind::electric), drive);
    const Spectrum sp = transmission_sweep(nl, "through", grid_around(6.44e9, 20e6, 0.25e6));
    const PeakSet peaks = find_peaks(sp, 0.05);
    REQUIRE(peaks.peaks.size() == 1);
    CHECK(std::abs(peaks.peaks[0].center_hz - 6.44e9) < 0.5e6);

    // Resonator loss alone sets the linewidth: 1/(R C) = gamma.
    const double fwhm_expected = rad_to_hz(p.gamma);
    const Spectrum fine = transmission_sweep(nl, "through", grid_around(6.44e9, 8e6, 20e3));
    const PeakSet fp = find_peaks(fine, 0.2);
    REQUIRE(fp.peaks.size() == 1);
    CHECK(rel(fp.peaks[0].fwhm_hz, fwhm_expected) < 0.10);
}

TEST_CASE("inverted operating point: lossless build, no damped build") {
    PhysicalParams p = lossless();
    p.lambda3_0 = 1.0;

    // Lossless: negative qubit-branch elements are legal and the undriven
    // network has a growing natural mode, matching the dressed-mode analysis.
    const Netlist nl = build_electric_model(table1(p, CircuitKind::electric));
    DriveOptions drive;
    drive.attach = true;
    CHECK_NOTHROW(ac_solve(build_electric_model(table1(p, CircuitKind::electric), drive),
                           p.omega_r));
    double max_growth = 0.0;
    for (const auto& s : natural_frequencies(nl)) max_growth = std::max(max_growth, s.real());
    CHECK(max_growth > 1e7);
    CHECK(dressed_modes(p).unstable);

    // With decoherence the mapped damping resistances turn negative, which
    // the netlist layer rejects.
    p.t2 = 1e-6;
    CHECK_THROWS_AS(build_electric_model(table1(p, CircuitKind::electric)), invalid_parameter);
    CHECK_THROWS_AS(build_magnetic_model(table1(p, CircuitKind::magnetic)), invalid_parameter);
}

TEST_CASE("drive attachment produces a measurable port on both models") {
    DriveOptions drive;
    drive.attach = true;
    const PhysicalParams p = device();

    const Netlist el = build_electric_model(table1(p, CircuitKind::electric), drive);
    CHECK(el.find_port("through") != nullptr);
    CHECK(el.sources().size() == 1);
    CHECK_NOTHROW(transmission_sweep(el, "through", {6.44e9}));

    const Netlist mg = build_magnetic_model(table1(p, CircuitKind::magnetic), drive);
    CHECK(mg.find_port("through") != nullptr);
    CHECK(mg.sources().size() == 1);
    CHECK_NOTHROW(transmission_sweep(mg, "through", {6.44e9}));

    // Undriven electric model carries neither source nor port.
    const Netlist bare = build_electric_model(table1(p, CircuitKind::electric));
    CHECK(bare.sources().empty());
    CHECK(bare.ports().empty());

    DriveOptions bad = drive;
    bad.c1 = -1e-17;
    CHECK_THROWS_AS(build_electric_model(table1(p, CircuitKind::electric), bad),
                    invalid_parameter);
}
