#include "tunnelq/angles.hpp"

#include <cmath>

namespace tunnelq {

namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

// cos at k * 45 degrees, k = 0..7
constexpr double kCosOctant[8] = {1.0, kHalfSqrt2, 0.0, -kHalfSqrt2, -1.0, -kHalfSqrt2, 0.0, kHalfSqrt2};

} // namespace

double cos_deg(double deg) noexcept {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0)
        r += 360.0;
    const double octant = r / 45.0;
    if (octant == std::floor(octant))
        return kCosOctant[static_cast<int>(octant) % 8];
    return std::cos(deg_to_rad(r));
}

double sin_deg(double deg) noexcept { return cos_deg(90.0 - deg); }

} // namespace tunnelq
