#pragma once

#include <string>

#include "cqed/rbe.hpp"
#include "cqed/spectrum.hpp"

namespace cqed {

// Shortest representation that round-trips a double exactly.
std::string format_g17(double x);

// All file writers are atomic: write to "<path>.tmp", then rename.
void write_text_atomic(const std::string& path, const std::string& content);

std::string time_series_csv(const TimeSeries& ts);
void write_time_series_csv(const std::string& path, const TimeSeries& ts);
TimeSeries read_time_series_csv(const std::string& path);

std::string spectrum_csv(const Spectrum& s);
void write_spectrum_csv(const std::string& path, const Spectrum& s);

}  // namespace cqed
