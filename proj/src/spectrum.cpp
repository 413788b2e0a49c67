#include "cqed/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>

#include <fftw3.h>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution of distinct plans is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double channel_value(const RbeState& s, Channel ch) {
    switch (ch) {
        case Channel::lambda1: return s.lambda1;
        case Channel::lambda2: return s.lambda2;
        case Channel::lambda3: return s.lambda3;
        case Channel::v: return s.v;
        case Channel::i: return s.i;
    }
    return 0.0;
}

Spectrum periodogram(const TimeSeries& series, Channel ch, Window window, int pad_factor) {
    const std::size_t n = series.samples.size();
    if (n < 16) throw invalid_parameter("periodogram needs at least 16 samples");
    if (!(series.dt > 0.0)) throw invalid_parameter("periodogram needs dt > 0");
    if (pad_factor < 1) throw invalid_parameter("pad_factor must be >= 1");

    const std::size_t n_pad = n * static_cast<std::size_t>(pad_factor);
    std::vector<double> in(n_pad, 0.0);
    std::vector<std::complex<double>> out(n_pad / 2 + 1);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_pad), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }

    double wsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double w = 1.0;
        if (window == Window::hann)
            w = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(j) /
                                     static_cast<double>(n - 1));
        wsum += w;
        in[j] = w * channel_value(series.samples[j], ch);
    }

    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }

    Spectrum spec;
    const std::size_t bins = out.size();
    spec.frequencies.resize(bins);
    spec.magnitude.resize(bins);
    spec.phase.resize(bins);
    const double df = 1.0 / (static_cast<double>(n_pad) * series.dt);
    for (std::size_t k = 0; k < bins; ++k) {
        const bool single_sided_pair = k != 0 && !(n_pad % 2 == 0 && k == n_pad / 2);
        spec.frequencies[k] = static_cast<double>(k) * df;
        spec.magnitude[k] = (single_sided_pair ? 2.0 : 1.0) * std::abs(out[k]) / wsum;
        spec.phase[k] = std::arg(out[k]);
    }
    return spec;
}

namespace {

// Topographic prominence: height above the higher of the two valley minima that
// separate this peak from the nearest higher terrain. A side that ends at the
// grid edge without higher terrain imposes no base on its own.
double prominence_at(const std::vector<double>& m, std::size_t j) {
    const double none = -std::numeric_limits<double>::infinity();
    double left_base = j > 0 ? m[j] : none;
    for (std::size_t k = j; k-- > 0;) {
        left_base = std::min(left_base, m[k]);
        if (m[k] > m[j]) break;
    }
    double right_base = j + 1 < m.size() ? m[j] : none;
    for (std::size_t k = j + 1; k < m.size(); ++k) {
        right_base = std::min(right_base, m[k]);
        if (m[k] > m[j]) break;
    }
    return m[j] - std::max(left_base, right_base);
}

// Linear-interpolated half-power crossings around index j at threshold `half`;
// NaN when a crossing runs off the grid.
double half_power_width(const Spectrum& s, std::size_t j, double half) {
    const auto& m = s.magnitude;
    const auto& f = s.frequencies;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::size_t r = j;
    while (r + 1 < m.size() && m[r + 1] >= half) ++r;
    if (r + 1 >= m.size()) return nan;
    const double fr = f[r] + (f[r + 1] - f[r]) * (m[r] - half) / (m[r] - m[r + 1]);

    std::size_t l = j;
    while (l > 0 && m[l - 1] >= half) --l;
    if (l == 0) return nan;
    const double fl = f[l] - (f[l] - f[l - 1]) * (m[l] - half) / (m[l] - m[l - 1]);

    return fr - fl;
}

}  // namespace

PeakSet find_peaks(const Spectrum& spec, double min_prominence) {
    const auto& m = spec.magnitude;
    const auto& f = spec.frequencies;
    PeakSet out;
    if (m.empty()) throw invalid_parameter("find_peaks on empty spectrum");
    if (!(min_prominence > 0.0 && min_prominence <= 1.0))
        throw invalid_parameter("min_prominence must lie in (0, 1]");
    const double global_max = *std::max_element(m.begin(), m.end());
    if (global_max <= 0.0) return out;
    const double threshold = min_prominence * global_max;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto emit_edge = [&](std::size_t j) {
        if (prominence_at(m, j) < threshold) return;
        Peak p;
        p.center_hz = f[j];
        p.height = m[j];
        p.fwhm_hz = nan;
        p.edge = true;
        out.peaks.push_back(p);
    };

    if (m.size() >= 2 && m[0] > m[1]) emit_edge(0);

    for (std::size_t j = 1; j + 1 < m.size(); ++j) {
        if (!(m[j] > m[j - 1] && m[j] > m[j + 1])) continue;
        if (prominence_at(m, j) < threshold) continue;

        Peak p;
        if (m[j - 1] > 0.0 && m[j + 1] > 0.0) {
            const double la = std::log(m[j - 1]);
            const double lb = std::log(m[j]);
            const double lc = std::log(m[j + 1]);
            const double denom = la - 2.0 * lb + lc;
            const double d = denom != 0.0 ? 0.5 * (la - lc) / denom : 0.0;
            p.center_hz = f[j] + d * (f[1] - f[0]);
            p.height = std::exp(lb - 0.25 * d * (la - lc));
        } else {
            p.center_hz = f[j];
            p.height = m[j];
        }
        p.fwhm_hz = half_power_width(spec, j, p.height / std::sqrt(2.0));
        out.peaks.push_back(p);
    }

    if (m.size() >= 2 && m[m.size() - 1] > m[m.size() - 2]) emit_edge(m.size() - 1);

    std::sort(out.peaks.begin(), out.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.center_hz < b.center_hz; });
    return out;
}

}  // namespace cqed
