#pragma once

#include <vector>

#include "cqed/rbe.hpp"

namespace cqed {

struct Spectrum {
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<double> magnitude;    // dimensionless, >= 0
    std::vector<double> phase;        // rad
};

enum class Window { rectangular, hann };
enum class Channel { lambda1, lambda2, lambda3, v, i };

double channel_value(const RbeState& s, Channel ch);

// One-sided magnitude spectrum of a trajectory channel: window, zero-pad to
// pad_factor * N, normalize by the window sum so a unit sinusoid has height 1.
// Frequency resolution is 1 / (pad_factor * N * dt). Requires >= 16 samples.
Spectrum periodogram(const TimeSeries& series, Channel ch, Window window, int pad_factor);

struct Peak {
    double center_hz = 0.0;
    double height = 0.0;
    double fwhm_hz = 0.0;  // half-power full width; NaN when not measurable
    bool edge = false;     // sits on the grid boundary, center not interpolated
};

struct PeakSet {
    std::vector<Peak> peaks;  // sorted by center
};

// Local maxima whose topographic prominence exceeds min_prominence * global max.
// Centers refined by 3-point parabolic interpolation on log magnitude; widths by
// linear interpolation at |peak|/sqrt(2).
PeakSet find_peaks(const Spectrum& spec, double min_prominence);

}  // namespace cqed
