#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "cqed/params.hpp"

namespace test_util {

// Reference device used throughout the suite: 6.44 GHz resonator, 266 MHz
// coupling, 1.6 MHz resonator decay, T2 = 1 us, ground-state operating point.
inline cqed::PhysicalParams device(double delta_hz = 0.0) {
    cqed::PhysicalParams p;
    p.omega_r = cqed::hz_to_rad(6.44e9);
    p.omega_q = p.omega_r + cqed::hz_to_rad(delta_hz);
    p.g = cqed::hz_to_rad(266e6);
    p.gamma = cqed::hz_to_rad(1.6e6);
    p.t2 = 1e-6;
    return p;
}

// Same device with every loss channel removed.
inline cqed::PhysicalParams lossless(double delta_hz = 0.0) {
    cqed::PhysicalParams p = device(delta_hz);
    p.gamma = 0.0;
    p.t2.reset();
    return p;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// True when fn() throws E and the message mentions `needle`.
template <class E>
bool throws_naming(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
    } catch (const E& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    } catch (...) {
        return false;
    }
    return false;
}

}  // namespace test_util
