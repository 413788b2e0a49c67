#pragma once

namespace cqed {

inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }
constexpr double rad_to_hz(double w_rad_s) { return w_rad_s / two_pi; }

}  // namespace cqed
