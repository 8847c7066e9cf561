#pragma once

// Sampled radial solution data with derivatives, plus the cubic-Hermite
// interpolation/quadrature helpers the rest of the library builds on.
// Having first derivatives at every node buys two orders in both operations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hamsys/errors.hpp"

namespace hamsys {

/// Piecewise-cubic Hermite interpolation on a strictly increasing grid.
inline double hermite_interp(std::span<const double> r, std::span<const double> y,
                             std::span<const double> dy, double x) {
    if (r.empty() || x < r.front() - 1e-12 || x > r.back() * (1.0 + 1e-12))
        throw DomainError("hermite_interp: query outside the sampled range");
    if (x <= r.front()) return y.front();
    if (x >= r.back()) return y.back();
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t i = std::size_t(it - r.begin()) - 1;
    const double h = r[i + 1] - r[i];
    const double th = (x - r[i]) / h;
    const double u = 1.0 - th;
    return u * u * (y[i] * (1.0 + 2.0 * th) + dy[i] * h * th) +
           th * th * (y[i + 1] * (3.0 - 2.0 * th) - dy[i + 1] * h * u);
}

/// Corrected trapezoidal rule (exact for cubics):
///   int f = sum h/2 (f_i + f_{i+1}) + h^2/12 (f'_i - f'_{i+1}).
inline double hermite_quad(std::span<const double> r, std::span<const double> f,
                           std::span<const double> df) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double h = r[i + 1] - r[i];
        acc += 0.5 * h * (f[i] + f[i + 1]) + h * h / 12.0 * (df[i] - df[i + 1]);
    }
    return acc;
}

/// Radial profile of the Lane-Emden pair (-Delta phi = psi^p, -Delta psi = phi^q)
/// normalized by phi(0) = 1 (the normalization is not assumed by consumers,
/// so rescaled copies remain valid profiles).
struct RadialProfile {
    int N = 0;
    double p = 0.0, q = 0.0;
    double beta = 0.0;   // psi(0)
    double R_max = 0.0;
    std::vector<double> r, phi, dphi, psi, dpsi;

    double phi_at(double x) const { return hermite_interp(r, phi, dphi, x); }
    double psi_at(double x) const { return hermite_interp(r, psi, dpsi, x); }
    double dphi_at(double x) const { return interp_deriv(phi, dphi, x); }
    double dpsi_at(double x) const { return interp_deriv(psi, dpsi, x); }

    /// Worst relative residual of the integrated radial equations
    ///   r^{N-1} phi'(r) = - int_0^r s^{N-1} psi^p ds   (and symmetrically),
    /// an independent consistency check of the stored samples.
    std::pair<double, double> integral_residuals() const {
        double worst_phi = 0.0, worst_psi = 0.0, acc_p = 0.0, acc_q = 0.0;
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            acc_p += seg(i, psi, dpsi, p);
            acc_q += seg(i, phi, dphi, q);
            const double rn = std::pow(r[i + 1], N - 1);
            const double sc = std::max(1e-12, std::fabs(acc_p));
            worst_phi = std::max(worst_phi, std::fabs(rn * dphi[i + 1] + acc_p) / sc);
            const double sc2 = std::max(1e-12, std::fabs(acc_q));
            worst_psi = std::max(worst_psi, std::fabs(rn * dpsi[i + 1] + acc_q) / sc2);
        }
        return {worst_phi, worst_psi};
    }

  private:
    double interp_deriv(const std::vector<double>& y, const std::vector<double>& dy,
                        double x) const {
        // derivative of the Hermite interpolant
        if (x <= r.front()) return dy.front();
        if (x >= r.back()) return dy.back();
        const auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t i = std::size_t(it - r.begin()) - 1;
        const double h = r[i + 1] - r[i];
        const double th = (x - r[i]) / h;
        const double u = 1.0 - th;
        return 6.0 * u * th * (y[i + 1] - y[i]) / h + dy[i] * u * (1.0 - 3.0 * th) +
               dy[i + 1] * th * (3.0 * th - 2.0);
    }

    // Hermite-quad segment of s^{N-1} u(s)^e.
    double seg(std::size_t i, const std::vector<double>& u, const std::vector<double>& du,
               double e) const {
        const double h = r[i + 1] - r[i];
        auto fg = [&](std::size_t j) {
            if (u[j] <= 0.0 || r[j] <= 0.0) return std::pair<double, double>{0.0, 0.0};
            const double rn = std::pow(r[j], N - 1);
            const double ue = std::pow(u[j], e);
            const double f = rn * ue;
            const double rf = (N - 1) * std::pow(r[j], N - 2) * ue + e * rn * ue / u[j] * du[j];
            return std::pair<double, double>{f, rf};
        };
        const auto [f0, g0] = fg(i);
        const auto [f1, g1] = fg(i + 1);
        return 0.5 * h * (f0 + f1) + h * h / 12.0 * (g0 - g1);
    }
};

} // namespace hamsys
