#pragma once

#include <numbers>

namespace tunnelq {

inline constexpr double deg_to_rad(double deg) noexcept { return deg * (std::numbers::pi / 180.0); }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * (180.0 / std::numbers::pi); }

// Degree-argument trig that is exact at multiples of 45 degrees, so the
// encoding angles 0/45/90 give exact amplitudes and weights.
double cos_deg(double deg) noexcept;
double sin_deg(double deg) noexcept;

} // namespace tunnelq
