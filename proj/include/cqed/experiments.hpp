#pragma once

#include <string>
#include <vector>

#include "cqed/circuits.hpp"
#include "cqed/params.hpp"
#include "cqed/spectrum.hpp"

namespace cqed {

// How a sweep obtains its spectrum: ring-down trajectory + FFT, linear AC
// transmission sweep of the equivalent circuit, or the characteristic-quartic
// roots directly. The first two are measurements, the third is the reference
// they are validated against.
enum class Route { rbe_fft, circuit_ac, oracle };

const char* route_name(Route r);
Route parse_route(const std::string& name);  // throws invalid_parameter

// One detuning point. NaN marks an unresolved branch (peak_low/peak_high) or a
// column that does not apply (lamb_shift on anticrossing rows).
struct SweepRow {
    double delta_hz = 0.0;
    double peak_low_hz = 0.0;
    double peak_high_hz = 0.0;
    double lamb_shift_hz = 0.0;
    Route route = Route::oracle;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // one per requested detuning, input order
};

struct ExperimentOptions {
    double dt = 1e-12;             // integration step, s
    double t_final = 4e-6;         // trajectory window, s
    int decimation = 16;           // recorded-sample stride
    int pad_factor = 4;
    double min_prominence = 0.02;  // fraction of the spectrum maximum
    double grid_step_hz = 0.25e6;  // AC sweep resolution
    DriveOptions drive{};          // attach is forced on for the circuit route
    int threads = -1;              // -1: CQED_THREADS else hardware; 0: sequential
};

// Worker count actually used for a requested value (see ExperimentOptions).
int resolve_threads(int requested);

// Dressed-mode pair vs detuning: per delta the qubit is set to
// omega_r + 2*pi*delta with inversion -1 and the two peak centers extracted.
SweepResult anticrossing_sweep(const PhysicalParams& p, const std::vector<double>& deltas_hz,
                               Route route, const ExperimentOptions& opt = {});

// Qubit-like branch minus the bare qubit frequency f_r + delta. Throws
// extraction_error when that branch is unresolved at some detuning.
SweepResult lamb_shift_curve(const PhysicalParams& p, const std::vector<double>& deltas_hz,
                             Route route, const ExperimentOptions& opt = {});

struct QndResult {
    Spectrum spectrum_minus;  // ground-state ring-down, v channel
    Spectrum spectrum_plus;   // excited-state ring-down
    double pull_hz = 0.0;     // cavity-like center difference, plus minus minus
    double fwhm_minus_hz = 0.0;
    double fwhm_plus_hz = 0.0;
};

// State-dependent cavity pull: two ring-downs with inversion -0.999 / +0.999 at
// fixed detuning, rectangular-window spectra, cavity-like peak per run. The
// qubit relaxation time t1 applies to both runs.
QndResult qnd_pull(const PhysicalParams& p, double delta_hz, double t1_s, double sim_window_s,
                   const ExperimentOptions& opt = {});

// CSV: delta_hz,peak_low_hz,peak_high_hz,lamb_shift_hz,route
std::string sweep_csv(const SweepResult& r);

}  // namespace cqed
