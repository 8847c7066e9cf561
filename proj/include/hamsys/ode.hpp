#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small dense ODE systems.
//
// Tailored to the radial shooting problems in this library:
//  - componentwise sign-crossing monitors (positive -> nonpositive), with the
//    crossing radius located on the cubic Hermite interpolant of the step;
//  - optional early stop at the first crossing (shooting dichotomies);
//  - optional radius-proportional step cap so accepted steps double as a
//    graded output grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "hamsys/errors.hpp"

namespace hamsys {

template <std::size_t D>
using StateVec = std::array<double, D>;

struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double h_init  = 1e-8;
    double h_min   = 1e-15;
    double h_max   = std::numeric_limits<double>::infinity();
    // When positive, caps the step at h_cap_rel * (r + h_cap_off): accepted
    // steps then form a log-graded grid suitable for profile output.
    double h_cap_rel = 0.0;
    double h_cap_off = 0.0;
    std::size_t max_steps = 5'000'000;
};

struct Crossing {
    int comp = -1;     // state component index
    double r  = 0.0;   // located crossing radius
};

template <std::size_t D>
struct IntegrateResult {
    double r_final = 0.0;
    StateVec<D> y_final{};
    bool reached_end = false;
    std::vector<Crossing> crossings;  // in detection order
    std::size_t n_steps = 0;
};

namespace detail {

/// Odd signed power: sgn(v)|v|^e, with 0 mapped to 0.
inline double sgn_pow(double v, double e) {
    return v == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(v), e), v);
}

// Cubic Hermite evaluation of one component over [r0, r0+h].
inline double hermite_eval(double r0, double h, double y0, double f0,
                           double y1, double f1, double r) {
    const double th = (r - r0) / h;
    const double u  = 1.0 - th;
    return u * u * (y0 * (1.0 + 2.0 * th) + f0 * h * th) +
           th * th * (y1 * (3.0 - 2.0 * th) - f1 * h * u);
}

template <std::size_t D>
struct NoObserver {
    void operator()(double, const StateVec<D>&, const StateVec<D>&) const {}
};

} // namespace detail

/// Integrate y' = rhs(r, y) from r0 to r_end.
/// `watch`: component indices monitored for a sign change from > 0 to <= 0.
/// `stop_at_crossing`: end integration at the first located crossing.
/// `observer(r, y, f)`: called once at r0 and after every accepted step.
template <std::size_t D, class RHS, class Observer = detail::NoObserver<D>>
IntegrateResult<D> integrate(RHS&& rhs, StateVec<D> y, double r0, double r_end,
                             const StepControl& ctl,
                             const std::vector<int>& watch = {},
                             bool stop_at_crossing = false,
                             Observer&& observer = Observer{}) {
    IntegrateResult<D> out;
    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double r = r0;
    StateVec<D> k1, k2, k3, k4, k5, k6, k7, yt, y1;
    rhs(r, y, k1);
    observer(r, y, k1);

    std::vector<char> crossed(D, 0);

    auto cap = [&](double rr) {
        double h = ctl.h_max;
        if (ctl.h_cap_rel > 0.0) h = std::min(h, ctl.h_cap_rel * (rr + ctl.h_cap_off));
        return h;
    };

    double h = std::min(ctl.h_init, cap(r));
    bool stopped_early = false;
    for (std::size_t step = 0; step < ctl.max_steps; ++step) {
        if (r >= r_end) { out.reached_end = true; break; }
        h = std::min(h, r_end - r);
        if (h < ctl.h_min)
            throw IntegratorError("step size underflow at r = " + std::to_string(r));

        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(r + c2 * h, yt, k2);
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(r + c3 * h, yt, k3);
        for (std::size_t i = 0; i < D; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(r + c4 * h, yt, k4);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(r + c5 * h, yt, k5);
        for (std::size_t i = 0; i < D; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(r + h, yt, k6);
        for (std::size_t i = 0; i < D; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(r + h, y1, k7);  // FSAL

        double err = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / D);

        if (err <= 1.0) {
            bool stop = false;
            for (int c : watch) {
                if (crossed[c] || !(y[c] > 0.0) || !(y1[c] <= 0.0)) continue;
                crossed[c] = 1;
                // Bisect the Hermite interpolant for the crossing radius.
                double lo = r, hi = r + h;
                for (int it = 0; it < 60 && (hi - lo) > 1e-14 * (std::fabs(hi) + 1.0); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double v = detail::hermite_eval(r, h, y[c], k1[c], y1[c], k7[c], mid);
                    (v > 0.0 ? lo : hi) = mid;
                }
                out.crossings.push_back({c, 0.5 * (lo + hi)});
                if (stop_at_crossing) stop = true;
            }
            r += h;
            y = y1;
            k1 = k7;
            ++out.n_steps;
            observer(r, y, k1);
            if (stop) { stopped_early = true; break; }
            double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = std::min({h * std::clamp(fac, 0.2, 5.0), cap(r)});
        } else {
            const double fac = std::max(0.9 * std::pow(err, -0.2), 0.2);
            h *= fac;
        }
    }
    if (!out.reached_end && !stopped_early)
        throw IntegratorError("step budget exhausted at r = " + std::to_string(r));
    out.r_final = r;
    out.y_final = y;
    return out;
}

} // namespace hamsys
