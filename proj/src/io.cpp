#include "cqed/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "cqed/errors.hpp"

namespace cqed {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_parameter("cannot open " + tmp + " for writing");
        out << content;
        if (!out.good()) throw invalid_parameter("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw invalid_parameter("cannot rename " + tmp + " to " + path);
    }
}

std::string time_series_csv(const TimeSeries& ts) {
    std::ostringstream out;
    out << "t,lambda1,lambda2,lambda3,v_norm,i_norm\n";
    for (std::size_t k = 0; k < ts.samples.size(); ++k) {
        const RbeState& s = ts.samples[k];
        const double t = ts.t0 + static_cast<double>(k) * ts.dt;
        out << format_g17(t) << ',' << format_g17(s.lambda1) << ',' << format_g17(s.lambda2)
            << ',' << format_g17(s.lambda3) << ',' << format_g17(s.v) << ','
            << format_g17(s.i) << '\n';
    }
    return out.str();
}

void write_time_series_csv(const std::string& path, const TimeSeries& ts) {
    write_text_atomic(path, time_series_csv(ts));
}

namespace {

std::vector<double> split_doubles(const std::string& line, std::size_t expect, int line_no) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t comma = line.find(',', start);
        const std::string field =
            line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        char* end = nullptr;
        const double x = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size())
            throw invalid_parameter("line " + std::to_string(line_no) + ": bad number '" +
                                    field + "'");
        out.push_back(x);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != expect)
        throw invalid_parameter("line " + std::to_string(line_no) + ": expected " +
                                std::to_string(expect) + " fields, got " +
                                std::to_string(out.size()));
    return out;
}

}  // namespace

TimeSeries read_time_series_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_parameter("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw invalid_parameter(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,lambda1,lambda2,lambda3,v_norm,i_norm")
        throw invalid_parameter(path + ": unexpected header '" + line + "'");

    TimeSeries ts;
    std::vector<double> times;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_doubles(line, 6, line_no);
        times.push_back(f[0]);
        ts.samples.push_back({f[1], f[2], f[3], f[4], f[5]});
    }
    if (times.size() < 2) throw invalid_parameter(path + ": need at least two samples");
    ts.t0 = times[0];
    ts.dt = times[1] - times[0];
    if (!(ts.dt > 0.0)) throw invalid_parameter(path + ": non-increasing time column");
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expected = ts.t0 + static_cast<double>(k) * ts.dt;
        if (std::fabs(times[k] - expected) > 1e-6 * ts.dt)
            throw invalid_parameter(path + ": non-uniform time step near row " +
                                    std::to_string(k + 1));
    }
    return ts;
}

std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream out;
    out << "freq_hz,magnitude,phase_rad\n";
    for (std::size_t k = 0; k < s.frequencies.size(); ++k)
        out << format_g17(s.frequencies[k]) << ',' << format_g17(s.magnitude[k]) << ','
            << format_g17(s.phase[k]) << '\n';
    return out.str();
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
    write_text_atomic(path, spectrum_csv(s));
}

}  // namespace cqed
