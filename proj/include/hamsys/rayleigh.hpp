#pragma once

// Rayleigh-type constant on a ball,
//
//   C_{r,Omega} = inf { |Delta u|_{(p+1)/p} : u = 0 on the boundary,
//                       |u|_{(r+1)/r} = 1 },
//
// over radial fields.  The field is parameterized by its Laplacian w = Delta u;
// u is recovered by the two radial integrations
//
//   u'(r) = r^{1-N} int_0^r s^{N-1} w(s) ds,      u(r) = -int_r^R u'(s) ds,
//
// which build in u'(0) = 0 and u(R) = 0 exactly.  The homogeneous ratio
// |w|_{(p+1)/p} / |Kw|_{(r+1)/r} is minimized by projected normalized gradient
// descent from several starts.  Two details matter for convergence:
//
//  * the descent runs on the dual variable v with w = sgn(v)|v|^p, which turns
//    the kinked |w|^{(p+1)/p} integrand into the smooth |v|^{p+1} and removes
//    the unbounded curvature where w changes sign;
//  * gradients and Barzilai-Borwein steps live in the mesh-measure inner
//    product, so the step size is meaningful across 15 orders of magnitude of
//    node weight on the graded grid.
//
// The adjoint of the discrete reconstruction K is applied exactly, as the
// reversed pair of cumulative sums.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hamsys/errors.hpp"
#include "hamsys/mesh.hpp"

namespace hamsys {

/// u = K w: radial double integral of the Laplacian, u(R) = 0.
inline std::vector<double> laplacian_inverse(const RadialMesh& mesh,
                                             const std::vector<double>& w) {
    const std::size_t n = mesh.size();
    if (w.size() != n) throw DomainError("laplacian_inverse: field/mesh size mismatch");
    std::vector<double> d(n, 0.0), u(n, 0.0);
    double acc = 0.0;  // int_0^r s^{N-1} w ds, trapezoid on the graded nodes
    for (std::size_t i = 1; i < n; ++i) {
        const double h = mesh.r[i] - mesh.r[i - 1];
        const double a0 = std::pow(mesh.r[i - 1], mesh.N - 1);
        const double a1 = std::pow(mesh.r[i], mesh.N - 1);
        acc += 0.5 * h * (a0 * w[i - 1] + a1 * w[i]);
        d[i] = acc / a1;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        const double h = mesh.r[i + 1] - mesh.r[i];
        u[i] = u[i + 1] - 0.5 * h * (d[i] + d[i + 1]);
    }
    return u;
}

/// Exact adjoint of laplacian_inverse (plain dot-product pairing).
inline std::vector<double> laplacian_inverse_adjoint(const RadialMesh& mesh,
                                                     const std::vector<double>& g) {
    const std::size_t n = mesh.size();
    if (g.size() != n) throw DomainError("laplacian_inverse_adjoint: size mismatch");
    // u_i = -sum_{k>=i} f_k,  f_k = (h_{k+1}/2)(d_k + d_{k+1})
    std::vector<double> fbar(n, 0.0), dbar(n, 0.0), wbar(n, 0.0);
    double run = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        run += g[k];
        fbar[k] = -run;
    }
    for (std::size_t j = 1; j < n; ++j) {
        double v = 0.0;
        if (j + 1 < n) v += 0.5 * (mesh.r[j + 1] - mesh.r[j]) * fbar[j];
        v += 0.5 * (mesh.r[j] - mesh.r[j - 1]) * fbar[j - 1];
        dbar[j] = v;  // d_0 is pinned to zero, so its cotangent is dropped
    }
    // d_i = (sum_{k<=i} e_k) / a_i,  e_k = (h_k/2)(a_{k-1} w_{k-1} + a_k w_k)
    double suffix = 0.0;
    std::vector<double> ebar(n, 0.0);
    for (std::size_t i = n; i-- > 1;) {
        suffix += dbar[i] / std::pow(mesh.r[i], mesh.N - 1);
        ebar[i] = suffix;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double aj = std::pow(mesh.r[j], mesh.N - 1);
        double v = 0.0;
        if (j >= 1) v += 0.5 * (mesh.r[j] - mesh.r[j - 1]) * aj * ebar[j];
        if (j + 1 < n) v += 0.5 * (mesh.r[j + 1] - mesh.r[j]) * aj * ebar[j + 1];
        wbar[j] = v;
    }
    return wbar;
}

struct RayleighOptions {
    int n_starts = 4;
    std::size_t max_iters = 4000;
    int window = 100;          // iterations per progress checkpoint
    double window_tol = 1e-7;  // relative decrease per window that counts as done
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct RayleighReport {
    double value = 0.0;   // best ratio found
    double spread = 0.0;  // (worst - best)/best over the starts
    int best_start = -1;
    std::size_t total_iters = 0;
};

namespace detail {

struct RatioParts {
    double na = 0.0, nb = 0.0, ratio = 0.0;
};

inline RatioParts rayleigh_ratio(const RadialMesh& mesh, const std::vector<double>& w,
                                 const std::vector<double>& u, double ea, double eb) {
    RatioParts out;
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        sa += mesh.w[i] * std::pow(std::fabs(w[i]), ea);
        sb += mesh.w[i] * std::pow(std::fabs(u[i]), eb);
    }
    out.na = std::pow(sa, 1.0 / ea);
    out.nb = std::pow(sb, 1.0 / eb);
    if (!(out.nb > 0.0)) throw DomainError("rayleigh: degenerate field (zero norm)");
    out.ratio = out.na / out.nb;
    return out;
}

} // namespace detail

inline RayleighReport rayleigh_constant_report(const RadialMesh& mesh, double r, double p,
                                               const RayleighOptions& opt = {}) {
    if (!(r > 0.0) || !(p > 0.0))
        throw DomainError("rayleigh_constant: exponents must be positive");
    const double ea = (p + 1.0) / p;
    const double eb = (r + 1.0) / r;
    const std::size_t n = mesh.size();

    RayleighReport rep;
    double worst = 0.0;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> v(n), w(n), grad(n), grad_prev(n), v_prev(n), v_try(n), w_try(n);
    const auto realize = [&](const std::vector<double>& vv, std::vector<double>& ww) {
        for (std::size_t i = 0; i < n; ++i)
            ww[i] = (vv[i] < 0.0 ? -1.0 : 1.0) * std::pow(std::fabs(vv[i]), p);
    };

    for (int start = 0; start < opt.n_starts; ++start) {
        if (start == 0) {
            for (std::size_t i = 0; i < n; ++i) v[i] = -1.0;  // concave bump
        } else {
            // smooth random start: cubic in r/R with Gaussian coefficients;
            // grid-frequency noise would just have to be descended away again
            double c0 = gauss(rng), c1 = gauss(rng), c2 = gauss(rng), c3 = gauss(rng);
            double vmax = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double x = mesh.r[i] / mesh.R;
                v[i] = c0 + x * (c1 + x * (c2 + x * c3));
                vmax = std::max(vmax, std::fabs(v[i]));
            }
            if (!(vmax > 1e-8)) for (std::size_t i = 0; i < n; ++i) v[i] = 1.0;
        }

        double tau = 0.0;
        bool settled = false;
        double final_ratio = 0.0;
        double checkpoint = 0.0;
        std::size_t it = 0;
        for (; it < opt.max_iters; ++it) {
            realize(v, w);
            const auto u = laplacian_inverse(mesh, w);
            const auto parts = detail::rayleigh_ratio(mesh, w, u, ea, eb);
            final_ratio = parts.ratio;
            if (it == 0) {
                checkpoint = final_ratio;
            } else if (opt.window > 0 && it % static_cast<std::size_t>(opt.window) == 0) {
                if (checkpoint - final_ratio <= opt.window_tol * final_ratio) {
                    settled = true;
                    break;
                }
                checkpoint = final_ratio;
            }

            std::vector<double> gb(n);
            for (std::size_t i = 0; i < n; ++i)
                gb[i] = mesh.w[i] * std::pow(std::fabs(u[i]), eb - 1.0) *
                        (u[i] < 0.0 ? -1.0 : 1.0) * std::pow(parts.nb, 1.0 - eb);
            const auto kt = laplacian_inverse_adjoint(mesh, gb);

            double g2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double sgn_v = v[i] < 0.0 ? -1.0 : 1.0;
                const double dna = p * std::pow(parts.na, 1.0 - ea) *
                                   std::pow(std::fabs(v[i]), p) * sgn_v;
                const double dnb = p * std::pow(std::fabs(v[i]), p - 1.0) *
                                   (mesh.w[i] > 0.0 ? kt[i] / mesh.w[i] : 0.0);
                grad[i] = (dna - parts.ratio * dnb) / parts.nb;
                g2 += mesh.w[i] * grad[i] * grad[i];
            }
            if (!(g2 > 0.0)) { settled = true; break; }

            if (it == 0) {
                tau = 0.1 / std::sqrt(g2);
            } else {
                double ss = 0.0, sy = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double si = v[i] - v_prev[i];
                    const double yi = grad[i] - grad_prev[i];
                    ss += mesh.w[i] * si * si;
                    sy += mesh.w[i] * si * yi;
                }
                tau = sy > 0.0 ? ss / sy : 0.1 / std::sqrt(g2);
            }
            v_prev = v;
            grad_prev = grad;

            bool improved = false;
            for (int bt = 0; bt < 50; ++bt) {
                for (std::size_t i = 0; i < n; ++i) v_try[i] = v[i] - tau * grad[i];
                realize(v_try, w_try);
                const auto u_try = laplacian_inverse(mesh, w_try);
                const auto pt = detail::rayleigh_ratio(mesh, w_try, u_try, ea, eb);
                if (pt.ratio < parts.ratio) {
                    const double sc = std::pow(pt.na, 1.0 / p);  // |w|_a back to 1
                    for (auto& x : v_try) x /= sc;
                    v.swap(v_try);
                    improved = true;
                    break;
                }
                tau *= 0.5;
            }
            if (!improved) { settled = true; break; }  // descent exhausted
        }
        rep.total_iters += it;
        if (!settled)
            throw ConvergenceError("rayleigh_constant: iteration cap without settling");

        if (rep.best_start < 0 || final_ratio < rep.value) {
            rep.value = final_ratio;
            rep.best_start = start;
        }
        if (final_ratio > worst) worst = final_ratio;
    }
    rep.spread = (worst - rep.value) / rep.value;
    return rep;
}

inline double rayleigh_constant(const RadialMesh& mesh, double r, double p,
                                const RayleighOptions& opt = {}) {
    return rayleigh_constant_report(mesh, r, p, opt).value;
}

} // namespace hamsys
