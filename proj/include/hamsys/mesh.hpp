#pragma once

// Radial quadrature mesh on a ball B_R in R^N.
//
// Nodes: the origin, a log-spaced band from R*1e-6 to R/2 resolving the
// concentration scale of rescaled profiles, and a cosine-clustered band from
// R/2 to R resolving the cutoff shell.  Weights are those of the piecewise
// linear nodal basis against the radial measure, so they are positive and sum
// to |B_R| exactly.

#include <cmath>
#include <cstddef>
#include <vector>

#include "hamsys/constants.hpp"
#include "hamsys/errors.hpp"

namespace hamsys {

struct RadialMesh {
    int N = 0;
    double R = 0.0;
    std::vector<double> r;  // strictly increasing, r.front() == 0, r.back() == R
    std::vector<double> w;  // positive, sums to |B_R|

    std::size_t size() const { return r.size(); }

    std::size_t count_below(double radius) const {
        std::size_t n = 0;
        while (n < r.size() && r[n] < radius) ++n;
        return n;
    }

    /// Quadrature of nodal values against the volume measure.
    double integrate(const std::vector<double>& g) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * g[i];
        return acc;
    }

    template <class F>
    double integrate_fn(F&& g) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * g(r[i]);
        return acc;
    }
};

struct MeshSpec {
    double r_min_frac = 1e-6;   // inner edge of the log band, as a fraction of R
    int per_decade = 256;       // log band density
    int n_boundary = 256;       // cosine band intervals
};

inline RadialMesh make_mesh(int N, double R, const MeshSpec& spec = {}) {
    if (N < 3) throw DomainError("make_mesh: requires N >= 3");
    if (!(R > 0.0)) throw DomainError("make_mesh: requires R > 0");
    RadialMesh m;
    m.N = N;
    m.R = R;

    m.r.push_back(0.0);
    const double lo = R * spec.r_min_frac, hi = 0.5 * R;
    const int n_log = std::max(2, int(std::ceil(std::log10(hi / lo) * spec.per_decade)));
    for (int i = 0; i <= n_log; ++i)
        m.r.push_back(lo * std::pow(hi / lo, double(i) / n_log));
    for (int j = 1; j <= spec.n_boundary; ++j) {
        const double t = std::sin(0.5 * pi * double(j) / spec.n_boundary);
        m.r.push_back(0.5 * R + 0.5 * R * t * t);
    }
    m.r.back() = R;  // pin exactly

    // Hat-function weights against omega_N r^{N-1} dr.  Per interval [a, b]:
    //   left  node: omega_N [ b (b^N - a^N)/N - (b^{N+1} - a^{N+1})/(N+1) ] / (b - a)
    //   right node: omega_N [ (b^{N+1} - a^{N+1})/(N+1) - a (b^N - a^N)/N ] / (b - a)
    // which sum to the exact measure of the interval.
    const double area = unit_sphere_area(N);
    m.w.assign(m.r.size(), 0.0);
    for (std::size_t i = 0; i + 1 < m.r.size(); ++i) {
        const double a = m.r[i], b = m.r[i + 1];
        const double dN = (std::pow(b, N) - std::pow(a, N)) / N;
        const double dN1 = (std::pow(b, N + 1) - std::pow(a, N + 1)) / (N + 1);
        m.w[i] += area * (b * dN - dN1) / (b - a);
        m.w[i + 1] += area * (dN1 - a * dN) / (b - a);
    }
    return m;
}

} // namespace hamsys
