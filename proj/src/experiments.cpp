#include "cqed/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cqed/errors.hpp"
#include "cqed/io.hpp"
#include "cqed/mna.hpp"
#include "cqed/rbe.hpp"

namespace cqed {

namespace {

constexpr double kSeedLambda1 = 0.04;
constexpr double kGroundInversion = -0.999;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_options(const ExperimentOptions& opt) {
    if (!(opt.dt > 0.0)) throw invalid_parameter("dt must be > 0");
    if (!(opt.t_final > 0.0)) throw invalid_parameter("t_final must be > 0");
    if (opt.decimation < 1) throw invalid_parameter("decimation must be >= 1");
    if (opt.pad_factor < 1) throw invalid_parameter("pad_factor must be >= 1");
    if (!(opt.min_prominence > 0.0 && opt.min_prominence <= 1.0))
        throw invalid_parameter("min_prominence must lie in (0, 1]");
    if (!(opt.grid_step_hz > 0.0)) throw invalid_parameter("grid_step_hz must be > 0");
}

// Pulls work items with an atomic cursor; the first exception cancels the rest.
template <typename Body>
void parallel_for(std::size_t n, int workers, const Body& body) {
    if (n == 0) return;
    const std::size_t pool_size = std::min<std::size_t>(std::max(workers, 1), n);
    if (pool_size <= 1) {
        for (std::size_t k = 0; k < n; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= n) return;
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct BranchPair {
    double low = kNaN;
    double high = kNaN;
};

// Two tallest peaks, ordered by center. A lone peak lands in `low` and is
// relabeled by the continuation pass once neighbors are known.
BranchPair select_branches(const PeakSet& ps) {
    BranchPair out;
    if (ps.peaks.empty()) return out;
    if (ps.peaks.size() == 1) {
        out.low = ps.peaks[0].center_hz;
        return out;
    }
    std::vector<const Peak*> by_height;
    by_height.reserve(ps.peaks.size());
    for (const auto& pk : ps.peaks) by_height.push_back(&pk);
    std::sort(by_height.begin(), by_height.end(),
              [](const Peak* a, const Peak* b) { return a->height > b->height; });
    out.low = std::min(by_height[0]->center_hz, by_height[1]->center_hz);
    out.high = std::max(by_height[0]->center_hz, by_height[1]->center_hz);
    return out;
}

BranchPair oracle_pair(const PhysicalParams& q) {
    const auto pr = dressed_modes(q).positive_pair_hz();
    return {pr[0], pr[1]};
}

PeakSet rbe_peaks(const PhysicalParams& q, const ExperimentOptions& opt) {
    const RbeState ic{kSeedLambda1, 0.0, kGroundInversion, 0.0, 0.0};
    const TimeSeries ts =
        integrate(ic, q, opt.dt, opt.t_final, IntegrationMode::full(), opt.decimation);
    const Spectrum spec = periodogram(ts, Channel::v, Window::hann, opt.pad_factor);
    return find_peaks(spec, opt.min_prominence);
}

PeakSet circuit_peaks(const PhysicalParams& q, const ExperimentOptions& opt) {
    const CircuitParams cp = table1(q, CircuitKind::electric);
    DriveOptions drive = opt.drive;
    drive.attach = true;
    const Netlist nl = build_electric_model(cp, drive);

    const double fr = rad_to_hz(q.omega_r);
    const double fq = rad_to_hz(q.omega_q);
    const double margin = 1.5 * rad_to_hz(q.g) + 50e6;
    const double lo = std::max(opt.grid_step_hz, std::min(fr, fq) - margin);
    const double hi = std::max(fr, fq) + margin;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / opt.grid_step_hz)) + 1;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = lo + static_cast<double>(k) * opt.grid_step_hz;

    const Spectrum spec = transmission_sweep(nl, "through", grid);
    return find_peaks(spec, opt.min_prominence);
}

bool complete(const SweepRow& r) {
    return !std::isnan(r.peak_low_hz) && !std::isnan(r.peak_high_hz);
}

// Nearest-continuation branch assignment for rows where only one peak
// resolved: match against the closest row with both branches, falling back to
// the midpoint of the bare frequencies.
void relabel_single_peaks(std::vector<SweepRow>& rows, double fr_hz) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
        SweepRow& r = rows[k];
        if (complete(r) || std::isnan(r.peak_low_hz)) continue;
        const double c = r.peak_low_hz;

        const SweepRow* ref = nullptr;
        for (std::size_t j = k; j-- > 0;)
            if (complete(rows[j])) {
                ref = &rows[j];
                break;
            }
        if (!ref)
            for (std::size_t j = k + 1; j < rows.size(); ++j)
                if (complete(rows[j])) {
                    ref = &rows[j];
                    break;
                }

        const bool is_high = ref ? std::abs(c - ref->peak_high_hz) < std::abs(c - ref->peak_low_hz)
                                 : c > fr_hz + 0.5 * r.delta_hz;
        if (is_high) {
            r.peak_high_hz = c;
            r.peak_low_hz = kNaN;
        }
    }
}

}  // namespace

const char* route_name(Route r) {
    switch (r) {
        case Route::rbe_fft: return "rbe-fft";
        case Route::circuit_ac: return "circuit-ac";
        case Route::oracle: return "oracle";
    }
    return "?";
}

Route parse_route(const std::string& name) {
    if (name == "rbe-fft") return Route::rbe_fft;
    if (name == "circuit-ac") return Route::circuit_ac;
    if (name == "oracle") return Route::oracle;
    throw invalid_parameter("unknown route '" + name + "' (rbe-fft | circuit-ac | oracle)");
}

int resolve_threads(int requested) {
    if (requested >= 0) return std::max(requested, 1);
    if (const char* env = std::getenv("CQED_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0)
            return v == 0 ? 1 : static_cast<int>(std::min(v, 1024L));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

SweepResult anticrossing_sweep(const PhysicalParams& p, const std::vector<double>& deltas_hz,
                               Route route, const ExperimentOptions& opt) {
    validate(p);
    check_options(opt);

    SweepResult out;
    out.rows.resize(deltas_hz.size());
    const int workers = route == Route::oracle ? 1 : resolve_threads(opt.threads);
    parallel_for(deltas_hz.size(), workers, [&](std::size_t k) {
        PhysicalParams q = p;
        q.omega_q = p.omega_r + hz_to_rad(deltas_hz[k]);
        q.lambda3_0 = -1.0;
        BranchPair pair;
        switch (route) {
            case Route::oracle: pair = oracle_pair(q); break;
            case Route::rbe_fft: pair = select_branches(rbe_peaks(q, opt)); break;
            case Route::circuit_ac: pair = select_branches(circuit_peaks(q, opt)); break;
        }
        out.rows[k] = {deltas_hz[k], pair.low, pair.high, kNaN, route};
    });
    relabel_single_peaks(out.rows, rad_to_hz(p.omega_r));
    return out;
}

SweepResult lamb_shift_curve(const PhysicalParams& p, const std::vector<double>& deltas_hz,
                             Route route, const ExperimentOptions& opt) {
    SweepResult out = anticrossing_sweep(p, deltas_hz, route, opt);
    const double fr_hz = rad_to_hz(p.omega_r);
    for (SweepRow& r : out.rows) {
        const double qubit_like = r.delta_hz >= 0.0 ? r.peak_high_hz : r.peak_low_hz;
        if (std::isnan(qubit_like))
            throw extraction_error("qubit-like peak unresolved at delta = " +
                                   format_g17(r.delta_hz) + " Hz");
        r.lamb_shift_hz = qubit_like - (fr_hz + r.delta_hz);
    }
    return out;
}

QndResult qnd_pull(const PhysicalParams& p, double delta_hz, double t1_s, double sim_window_s,
                   const ExperimentOptions& opt) {
    validate(p);
    check_options(opt);
    if (!(t1_s > 0.0)) throw invalid_parameter("t1 must be > 0");
    if (!(sim_window_s > 0.0)) throw invalid_parameter("sim_window must be > 0");

    PhysicalParams q = p;
    q.omega_q = p.omega_r + hz_to_rad(delta_hz);
    q.t1 = t1_s;
    if (!(std::abs(hz_to_rad(delta_hz)) > q.g))
        throw invalid_parameter("qnd_pull requires |2*pi*delta| > g (dispersive regime)");

    const double fr_hz = rad_to_hz(p.omega_r);
    struct Run {
        Spectrum spec;
        double center = 0.0;
        double fwhm = 0.0;
    };
    std::array<double, 2> inversions{kGroundInversion, -kGroundInversion};
    std::array<Run, 2> runs;
    parallel_for(2, std::min(resolve_threads(opt.threads), 2), [&](std::size_t k) {
        const RbeState ic{kSeedLambda1, 0.0, inversions[k], 0.0, 0.0};
        const TimeSeries ts =
            integrate(ic, q, opt.dt, sim_window_s, IntegrationMode::full(), opt.decimation);
        Run& run = runs[k];
        run.spec = periodogram(ts, Channel::v, Window::rectangular, opt.pad_factor);
        const PeakSet ps = find_peaks(run.spec, opt.min_prominence);
        // Tallest peak on the cavity side of the spectrum. Closer-to-fr would
        // be fooled when fast relaxation smears the pulled line into a fringe
        // train: the fringe nearest the bare frequency is a weak tail lobe,
        // not the line.
        const double fq_hz = rad_to_hz(q.omega_q);
        const Peak* best = nullptr;
        for (const Peak& pk : ps.peaks) {
            if (std::abs(pk.center_hz - fr_hz) >= std::abs(pk.center_hz - fq_hz)) continue;
            if (!best || pk.height > best->height) best = &pk;
        }
        if (!best)
            throw extraction_error("no cavity-like peak (inversion " +
                                   format_g17(inversions[k]) + ")");
        if (best->edge || std::isnan(best->fwhm_hz))
            throw extraction_error("cavity-like peak not fully resolved (inversion " +
                                   format_g17(inversions[k]) + ")");
        run.center = best->center_hz;
        run.fwhm = best->fwhm_hz;
    });

    QndResult out;
    out.spectrum_minus = std::move(runs[0].spec);
    out.spectrum_plus = std::move(runs[1].spec);
    out.pull_hz = runs[1].center - runs[0].center;
    out.fwhm_minus_hz = runs[0].fwhm;
    out.fwhm_plus_hz = runs[1].fwhm;
    return out;
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream out;
    out << "delta_hz,peak_low_hz,peak_high_hz,lamb_shift_hz,route\n";
    for (const SweepRow& row : r.rows)
        out << format_g17(row.delta_hz) << ',' << format_g17(row.peak_low_hz) << ','
            << format_g17(row.peak_high_hz) << ',' << format_g17(row.lamb_shift_hz) << ','
            << route_name(row.route) << '\n';
    return out.str();
}

}  // namespace cqed
