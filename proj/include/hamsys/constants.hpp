#pragma once

#include <cmath>

namespace hamsys {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Surface measure of the unit sphere S^{N-1} in R^N: 2 pi^{N/2} / Gamma(N/2).
inline double unit_sphere_area(int N) {
    return 2.0 * std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N);
}

/// Volume of the ball B_R in R^N.
inline double ball_volume(int N, double R) {
    return unit_sphere_area(N) / N * std::pow(R, N);
}

} // namespace hamsys
