#pragma once

// Two-parameter radial shooting for the coupled Dirichlet problem on a ball:
//
//   -Delta u = lambda |v|^{r-1} v + |v|^{p-1} v
//   -Delta v = mu     |u|^{s-1} u + |u|^{q-1} u      in B_R,  u = v = 0 on the
//                                                    boundary.
//
// A radial candidate is determined by the center values (alpha, beta) = (u(0),
// v(0)); integrating outward turns the boundary condition into a root-finding
// problem for the map (alpha, beta) -> (u(R), v(R)).  solve_ball scans a
// log-spaced box for sign-change cells of that map and polishes each candidate
// with a damped Newton iteration in log coordinates.  "NotFound" is evidence
// (the box was exhausted at the configured density), never a proof.

#include <algorithm>
#include <functional>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hamsys/errors.hpp"
#include "hamsys/ode.hpp"
#include "hamsys/params.hpp"

namespace hamsys {

// ============================================================================
// Types
// ============================================================================

struct ShootingState {
    double alpha = 1.0;  // u(0)
    double beta = 1.0;   // v(0)
    double R = 1.0;
};

struct ShootProfiles {
    std::vector<double> r, u, du, v, dv;
    std::size_t size() const { return r.size(); }
};

struct ShootReport {
    double u_end = 0.0, v_end = 0.0;  // field values where integration stopped
    double r_end = 0.0;
    bool reached_R = false;
    int first_crossing = -1;  // 0: u, 1: v, -1: none
    double crossing_r = 0.0;
    ShootProfiles prof;
};

struct SearchBox {
    double alpha_lo = 1e-2, alpha_hi = 1e3;
    double beta_lo = 1e-2, beta_hi = 1e3;
    int n_alpha = 64, n_beta = 64;
};

enum class Verdict { Found, NotFound, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Found: return "Found";
        case Verdict::NotFound: return "NotFound";
        default: return "Inconclusive";
    }
}

struct SolveTrace {
    int n_scan = 0;            // boundary-map evaluations in the coarse scan
    int n_scan_failed = 0;     // scan shots lost to integrator blow-up
    int n_candidates = 0;      // joint sign-change cells
    int n_polished = 0;        // candidates resolved or attempted
    int n_newton_iters = 0;
    int n_refine_scans = 0;    // subgrid re-scans of stubborn cells
    int n_nonpositive = 0;     // converged roots rejected for sign changes
    int n_aborted = 0;         // candidates unresolved at maximum depth
    int n_curve_steps = 0;     // accepted zero-curve continuation steps
    int n_curve_shots = 0;     // boundary-map evaluations while tracing
};

struct SolveResult {
    Verdict verdict = Verdict::NotFound;
    bool positive = false;
    double alpha = 0.0, beta = 0.0;
    double residual_u = std::numeric_limits<double>::infinity();
    double residual_v = std::numeric_limits<double>::infinity();
    double R = 0.0;
    ShootProfiles prof;
    SolveTrace trace;
};

// ============================================================================
// Critical rescaling
// ============================================================================

/// Exponents of the critical dilation u_R(x) = R^{-a} u(x/R),
/// v_R(x) = R^{-b} v(x/R).
inline double scaling_exponent_u(double p, double q) { return 2.0 * (p + 1.0) / (p * q - 1.0); }
inline double scaling_exponent_v(double p, double q) { return 2.0 * (q + 1.0) / (p * q - 1.0); }

/// Parameters solved by the transported fields on B_R when (u, v) solves the
/// system on B_1: the pure powers are invariant, the perturbations pick up
/// R^{b(r-p)} and R^{a(s-q)}.
inline SystemParams rescaled_params(const SystemParams& P, double R) {
    const double a = scaling_exponent_u(P.p, P.q);
    const double b = scaling_exponent_v(P.p, P.q);
    SystemParams out = P;
    out.lambda = P.lambda * std::pow(R, b * (P.r - P.p));
    out.mu = P.mu * std::pow(R, a * (P.s - P.q));
    return out;
}

/// Center values of the transported fields.
inline ShootingState rescaled_state(const SystemParams& P, const ShootingState& st, double R) {
    const double a = scaling_exponent_u(P.p, P.q);
    const double b = scaling_exponent_v(P.p, P.q);
    return ShootingState{st.alpha * std::pow(R, -a), st.beta * std::pow(R, -b), st.R * R};
}

// ============================================================================
// Integration core
// ============================================================================

namespace detail {

struct CoupledRHS {
    int N;
    double p, q, r, s, lam, mu;
    void operator()(double rr, const StateVec<4>& y, StateVec<4>& f) const {
        const double inv = (N - 1) / rr;
        f[0] = y[1];
        f[1] = -inv * y[1] - (lam * sgn_pow(y[2], r) + sgn_pow(y[2], p));
        f[2] = y[3];
        f[3] = -inv * y[3] - (mu * sgn_pow(y[0], s) + sgn_pow(y[0], q));
    }
};

inline void check_shoot_args(const SystemParams& P, const ShootingState& st) {
    // Deliberately looser than the admissibility of the variational theory:
    // the integrator is happy with lambda = mu = 0 and off-hyperbola powers.
    if (P.N < 3) throw DomainError("shoot: requires N >= 3");
    if (!(P.p > 0.0) || !(P.q > 0.0)) throw DomainError("shoot: requires p, q > 0");
    if (!(P.r > 0.0) || !(P.s > 0.0)) throw DomainError("shoot: requires r, s > 0");
    if (!(P.lambda >= 0.0) || !(P.mu >= 0.0))
        throw DomainError("shoot: requires lambda, mu >= 0");
    if (!(st.alpha > 0.0) || !(st.beta > 0.0))
        throw DomainError("shoot: requires positive center values");
    if (!(st.R > 0.0)) throw DomainError("shoot: requires R > 0");
}

// Second-order series start off the coordinate singularity:
// u(r) = alpha - F_v r^2/(2N) + O(r^4) with F_v = lambda beta^r + beta^p.
inline StateVec<4> coupled_series_start(const SystemParams& P, const ShootingState& st,
                                        double r0) {
    const double Fv = P.lambda * std::pow(st.beta, P.r) + std::pow(st.beta, P.p);
    const double Fu = P.mu * std::pow(st.alpha, P.s) + std::pow(st.alpha, P.q);
    StateVec<4> y{};
    y[0] = st.alpha - Fv * r0 * r0 / (2.0 * P.N);
    y[1] = -Fv * r0 / P.N;
    y[2] = st.beta - Fu * r0 * r0 / (2.0 * P.N);
    y[3] = -Fu * r0 / P.N;
    return y;
}

// Handoff radius keeping both quadratic corrections at relative O(1e-8).
inline double coupled_series_radius(const SystemParams& P, const ShootingState& st) {
    const double Fv = P.lambda * std::pow(st.beta, P.r) + std::pow(st.beta, P.p);
    const double Fu = P.mu * std::pow(st.alpha, P.s) + std::pow(st.alpha, P.q);
    double r0 = 1e-6 * st.R;
    if (Fv > 0.0) r0 = std::min(r0, 1e-4 * std::sqrt(2.0 * P.N * st.alpha / Fv));
    if (Fu > 0.0) r0 = std::min(r0, 1e-4 * std::sqrt(2.0 * P.N * st.beta / Fu));
    return std::max(r0, 1e-13);
}

// Boundary-map evaluation for the scan and the Newton polish: integrate to R
// without stopping (the continued fields may go negative; the map stays
// smooth), return (u(R), v(R)).
struct BoundaryValue {
    double uR, vR;
};

inline BoundaryValue boundary_map(const SystemParams& P, const ShootingState& st,
                                  double abs_tol, double rel_tol,
                                  std::size_t max_steps) {
    const double r0 = coupled_series_radius(P, st);
    StepControl sc;
    sc.abs_tol = abs_tol;
    sc.rel_tol = rel_tol;
    sc.h_init = 0.01 * r0;
    sc.max_steps = max_steps;
    const CoupledRHS rhs{P.N, P.p, P.q, P.r, P.s, P.lambda, P.mu};
    const auto res =
        integrate<4>(rhs, coupled_series_start(P, st, r0), r0, st.R, sc);
    return BoundaryValue{res.y_final[0], res.y_final[2]};
}

// ----------------------------------------------------------------------------
// Zero-curve continuation
// ----------------------------------------------------------------------------
// For strongly asymmetric exponent pairs the two zero curves of the boundary
// map meet inside a sliver of the (alpha, beta) plane that no affordable grid
// resolves: along the concentration direction beta ~ alpha^{b/a} the set of
// center values whose shots stay finite thins out rapidly while everything
// nearby blows up, so a scan sees both curves but never a joint cell.  The
// tracer walks one component's zero curve -- bisection in beta nested inside
// a geometric walk in alpha -- and watches the other component's boundary
// value; a sign change of the watched value brackets the intersection in
// alpha without the walk ever leaving the sliver.

struct CurveTracer {
    const SystemParams& P;
    double R;
    int flip_comp;  // 0: walk u(R) = 0 watching v(R); 2: the converse
    int budget;     // cap on boundary-map evaluations, shared via *shots
    int* steps;
    int* shots;

    bool eval(double a, double b, double& flip, double& watch) const {
        if (*shots >= budget) return false;
        ++*shots;
        try {
            const auto bv = boundary_map(P, ShootingState{a, b, R}, 1e-9, 1e-7, 40'000);
            if (!std::isfinite(bv.uR) || !std::isfinite(bv.vR)) return false;
            flip = flip_comp == 0 ? bv.uR : bv.vR;
            watch = flip_comp == 0 ? bv.vR : bv.uR;
            return true;
        } catch (const IntegratorError&) {
            return false;
        }
    }

    // First beta in multiplicative direction f whose flip value has the
    // requested sign; a step through the blow-up frontier is bisected back to
    // the inside edge.  Returns -1 when the walk loses the curve.
    double walk_for_sign(double a, double b0, bool want_nonpos, double f) const {
        double b_in = b0;
        for (int k = 0; k < 48; ++k) {
            const double b = b_in * f;
            double fv, wv;
            if (eval(a, b, fv, wv)) {
                if ((fv <= 0.0) == want_nonpos) return b;
                b_in = b;
                continue;
            }
            double in = b_in, out = b;
            for (int it = 0; it < 48; ++it) {
                const double mid = std::sqrt(in * out);
                double f2, w2;
                (eval(a, mid, f2, w2) ? in : out) = mid;
            }
            if (in == b_in) return -1.0;
            double f2, w2;
            if (eval(a, in, f2, w2) && (f2 <= 0.0) == want_nonpos) return in;
            return -1.0;
        }
        return -1.0;
    }

    // Locate the flip component's zero in beta near seed; reports the watched
    // component's value there.  Returns -1 on failure.
    double find_flip(double a, double seed, double& watch) const {
        double fv, wv;
        if (!eval(a, seed, fv, wv)) {
            bool got = false;
            for (int k = 1; k <= 40 && !got; ++k) {
                const double f = std::pow(1.01, k);
                if (eval(a, seed * f, fv, wv)) { seed *= f; got = true; }
                else if (eval(a, seed / f, fv, wv)) { seed /= f; got = true; }
            }
            if (!got) return -1.0;
        }
        double b_pos, b_neg;
        if (fv > 0.0) {
            b_pos = seed;
            b_neg = walk_for_sign(a, b_pos, true, 1.35);
            if (b_neg < 0.0) b_neg = walk_for_sign(a, b_pos, true, 1.0 / 1.35);
            if (b_neg < 0.0) return -1.0;
        } else {
            b_neg = seed;
            b_pos = walk_for_sign(a, b_neg, false, 1.0 / 1.35);
            if (b_pos < 0.0) b_pos = walk_for_sign(a, b_neg, false, 1.35);
            if (b_pos < 0.0) return -1.0;
        }
        double lo = std::min(b_pos, b_neg), hi = std::max(b_pos, b_neg);
        const bool lo_pos = b_pos < b_neg;
        for (int it = 0; it < 48; ++it) {
            const double mid = std::sqrt(lo * hi);
            double f2, w2;
            if (!eval(a, mid, f2, w2)) return -1.0;
            ((f2 > 0.0) == lo_pos ? lo : hi) = mid;
        }
        const double b = std::sqrt(lo * hi);
        double f2;
        if (!eval(a, b, f2, watch)) return -1.0;
        return b;
    }

    // Walk the curve from (a0, b0) in alpha direction sgn until the watched
    // value w changes sign (bisected to the intersection, returned in ra, rb),
    // stops approaching zero, or the curve is lost.
    bool trace(double a0, double b0, double w0, double sgn, double& ra, double& rb) const {
        double a = a0, b = b0, w = w0;
        double slope = 0.0;
        double step = std::pow(1.04, sgn);
        double best = std::fabs(w);
        int fails = 0, stale = 0;
        for (int it = 0; it < 400; ++it) {
            const double an = a * step;
            if (an > 1e6 || an < 1e-6) return false;
            double wn;
            const double bn = find_flip(an, b * std::pow(step, slope), wn);
            if (bn < 0.0) {
                step = std::sqrt(step);
                if (++fails > 20) return false;
                continue;
            }
            fails = 0;
            ++*steps;
            const double lr = std::log(an / a);
            if (std::fabs(lr) > 1e-12)
                slope = std::clamp(std::log(bn / b) / lr, -20.0, 20.0);
            const double pa = a, pb = b, pw = w;
            a = an;
            b = bn;
            w = wn;
            const double grown = std::pow(step, 1.3);
            step = sgn > 0.0 ? std::min(1.08, grown) : std::max(1.0 / 1.08, grown);
            if ((pw > 0.0) != (w > 0.0)) {
                double alo = pa, ahi = a, blo = pb, bhi = b;
                const bool lo_sign = pw > 0.0;
                for (int k = 0; k < 40; ++k) {
                    const double am = std::sqrt(alo * ahi);
                    double wm;
                    const double bm = find_flip(am, std::sqrt(blo * bhi), wm);
                    if (bm < 0.0) return false;
                    if ((wm > 0.0) == lo_sign) { alo = am; blo = bm; }
                    else                       { ahi = am; bhi = bm; }
                }
                ra = std::sqrt(alo * ahi);
                rb = std::sqrt(blo * bhi);
                return true;
            }
            if (std::fabs(w) < 0.995 * best) { best = std::fabs(w); stale = 0; }
            else if (++stale > 25) return false;
        }
        return false;
    }
};

} // namespace detail

// ============================================================================
// shoot
// ============================================================================

/// Integrate one radial candidate outward.  Halts at the first zero crossing
/// of u or v (crossing radius reported) unless asked to continue; profiles are
/// collected on the accepted-step grid, log-graded near the origin.
inline ShootReport shoot(const SystemParams& P, const ShootingState& st, double tol = 1e-10,
                         bool halt_at_crossing = true) {
    detail::check_shoot_args(P, st);
    if (!(tol > 0.0)) throw DomainError("shoot: requires tol > 0");

    const double r0 = detail::coupled_series_radius(P, st);
    StepControl sc;
    sc.abs_tol = tol;
    sc.rel_tol = tol;
    sc.h_init = 0.01 * r0;
    sc.h_cap_rel = 0.02;           // log grading toward the origin
    sc.h_max = st.R / 512.0;       // uniform resolution toward the boundary

    ShootReport rep;
    auto obs = [&](double r, const StateVec<4>& y, const StateVec<4>&) {
        rep.prof.r.push_back(r);
        rep.prof.u.push_back(y[0]);
        rep.prof.du.push_back(y[1]);
        rep.prof.v.push_back(y[2]);
        rep.prof.dv.push_back(y[3]);
    };
    const detail::CoupledRHS rhs{P.N, P.p, P.q, P.r, P.s, P.lambda, P.mu};
    const auto res = integrate<4>(rhs, detail::coupled_series_start(P, st, r0), r0, st.R, sc,
                                  {0, 2}, halt_at_crossing, obs);

    rep.u_end = res.y_final[0];
    rep.v_end = res.y_final[2];
    rep.r_end = res.r_final;
    rep.reached_R = res.reached_end;
    if (!res.crossings.empty()) {
        const auto& c = res.crossings.front();
        rep.first_crossing = c.comp == 0 ? 0 : 1;
        rep.crossing_r = c.r;
    }
    return rep;
}

// ============================================================================
// solve_ball
// ============================================================================

inline SolveResult solve_ball(const SystemParams& P, double R, const SearchBox& box = {},
                              double tol = 1e-9) {
    detail::check_shoot_args(P, ShootingState{1.0, 1.0, R});
    if (!(tol > 0.0)) throw DomainError("solve_ball: requires tol > 0");
    if (!(box.alpha_lo > 0.0) || !(box.alpha_hi > box.alpha_lo) || !(box.beta_lo > 0.0) ||
        !(box.beta_hi > box.beta_lo))
        throw ConfigError("solve_ball: search box must satisfy 0 < lo < hi");
    if (box.n_alpha < 2 || box.n_beta < 2)
        throw ConfigError("solve_ball: search box needs at least 2 points per axis");

    SolveResult out;
    out.R = R;
    const int na = box.n_alpha, nb = box.n_beta;
    const double la0 = std::log(box.alpha_lo), la1 = std::log(box.alpha_hi);
    const double lb0 = std::log(box.beta_lo), lb1 = std::log(box.beta_hi);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto node_a = [&](int i) { return std::exp(la0 + (la1 - la0) * i / (na - 1)); };
    auto node_b = [&](int j) { return std::exp(lb0 + (lb1 - lb0) * j / (nb - 1)); };

    // --- coarse scan of the boundary map -----------------------------------
    std::vector<double> U(static_cast<std::size_t>(na) * nb, nan), V = U;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            ++out.trace.n_scan;
            try {
                const auto bv = detail::boundary_map(P, ShootingState{node_a(i), node_b(j), R},
                                                     1e-9, 1e-7, 40'000);
                U[std::size_t(i) * nb + j] = bv.uR;
                V[std::size_t(i) * nb + j] = bv.vR;
            } catch (const IntegratorError&) {
                ++out.trace.n_scan_failed;  // blow-up cell; stays NaN
            }
        }
    }

    // --- sign-change cells, ranked by boundary smallness --------------------
    struct Cell {
        double score;
        int i, j;
    };
    // Joint sign-change cells of a (log-uniform) grid of boundary values; the
    // score is the best corner's relative boundary smallness.
    auto collect_cells = [](const std::vector<double>& Ug, const std::vector<double>& Vg,
                            int ma, int mb, auto&& va, auto&& vb) {
        std::vector<Cell> found;
        for (int i = 0; i + 1 < ma; ++i) {
            for (int j = 0; j + 1 < mb; ++j) {
                const double uu[4] = {Ug[std::size_t(i) * mb + j], Ug[std::size_t(i + 1) * mb + j],
                                      Ug[std::size_t(i) * mb + j + 1],
                                      Ug[std::size_t(i + 1) * mb + j + 1]};
                const double vv[4] = {Vg[std::size_t(i) * mb + j], Vg[std::size_t(i + 1) * mb + j],
                                      Vg[std::size_t(i) * mb + j + 1],
                                      Vg[std::size_t(i + 1) * mb + j + 1]};
                bool finite = true;
                for (int k = 0; k < 4; ++k)
                    finite = finite && std::isfinite(uu[k]) && std::isfinite(vv[k]);
                if (!finite) continue;
                const bool usign = (uu[0] > 0) != (uu[1] > 0) || (uu[0] > 0) != (uu[2] > 0) ||
                                   (uu[0] > 0) != (uu[3] > 0);
                const bool vsign = (vv[0] > 0) != (vv[1] > 0) || (vv[0] > 0) != (vv[2] > 0) ||
                                   (vv[0] > 0) != (vv[3] > 0);
                if (!usign || !vsign) continue;
                const double aa[4] = {va(i), va(i + 1), va(i), va(i + 1)};
                const double bb[4] = {vb(j), vb(j), vb(j + 1), vb(j + 1)};
                double sc = std::numeric_limits<double>::infinity();
                for (int k = 0; k < 4; ++k)
                    sc = std::min(sc,
                                  std::max(std::fabs(uu[k]) / aa[k], std::fabs(vv[k]) / bb[k]));
                found.push_back(Cell{sc, i, j});
            }
        }
        std::sort(found.begin(), found.end(), [](const Cell& a, const Cell& b) {
            if (a.score != b.score) return a.score < b.score;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        return found;
    };

    const auto cells = collect_cells(U, V, na, nb, node_a, node_b);
    out.trace.n_candidates = static_cast<int>(cells.size());

    // --- candidate resolution ------------------------------------------------
    // Newton from the cell center either converges or wanders: the u- and
    // v-zero curves can cross one coarse cell without intersecting.  A capped
    // candidate is therefore re-scanned on a refined subgrid; if that
    // separates the two sign-change sets, the cell is root-free at the
    // refined density and counts toward NotFound.  Only candidates that still
    // cannot be split at the maximum depth make the verdict Inconclusive.
    // Polish evaluations run close to the integrator's accuracy floor: near a
    // stiff root the trajectory amplifies local truncation error by orders of
    // magnitude, and the residual can only be driven as far as that noise.
    auto eval = [&](double xa, double yb, detail::BoundaryValue& bv) {
        try {
            bv = detail::boundary_map(P, ShootingState{std::exp(xa), std::exp(yb), R}, 1e-13,
                                      1e-12, 1'000'000);
        } catch (const IntegratorError&) {
            return false;
        }
        return true;
    };
    auto rel_res = [&](double xa, double yb, const detail::BoundaryValue& bv) {
        return std::max(std::fabs(bv.uR) / std::exp(xa), std::fabs(bv.vR) / std::exp(yb));
    };

    // A stiff root can sit where the trajectory amplifies truncation error so
    // strongly that the computable map bottoms out well above tol; Newton then
    // stalls at that floor instead of converging.  A stall is accepted as a
    // located root only when the residual is already far below any curve
    // near-miss (those stall around 1e-1 relative), and the stalled residual
    // is reported as-is.
    const int iter_cap = 40;
    constexpr double polish_floor = 1e-6;
    enum class PolishOutcome { Converged, Floor, Lost };
    auto newton = [&](double& x, double& y, double& res_out) {
        detail::BoundaryValue F;
        res_out = std::numeric_limits<double>::infinity();
        if (!eval(x, y, F)) return PolishOutcome::Lost;
        double res = rel_res(x, y, F);
        for (int it = 0; it < iter_cap; ++it) {
            ++out.trace.n_newton_iters;
            res_out = res;
            if (res < tol) return PolishOutcome::Converged;
            const double h = 1e-6;
            detail::BoundaryValue Fx, Fy;
            if (!eval(x + h, y, Fx) || !eval(x, y + h, Fy)) return PolishOutcome::Lost;
            const double j11 = (Fx.uR - F.uR) / h, j12 = (Fy.uR - F.uR) / h;
            const double j21 = (Fx.vR - F.vR) / h, j22 = (Fy.vR - F.vR) / h;
            const double det = j11 * j22 - j12 * j21;
            if (!(std::fabs(det) > 0.0)) return PolishOutcome::Lost;
            const double dx = -(j22 * F.uR - j12 * F.vR) / det;
            const double dy = -(-j21 * F.uR + j11 * F.vR) / det;
            double t = 1.0;
            double new_res = res;
            bool stepped = false;
            for (int bt = 0; bt < 10; ++bt) {
                detail::BoundaryValue Ft;
                if (eval(x + t * dx, y + t * dy, Ft) &&
                    (new_res = rel_res(x + t * dx, y + t * dy, Ft)) < res) {
                    x += t * dx;
                    y += t * dy;
                    F = Ft;
                    stepped = true;
                    break;
                }
                t *= 0.5;
            }
            if (!stepped) return PolishOutcome::Floor;
            const bool stalling = new_res > 0.99 * res;
            res = new_res;
            res_out = res;
            if (res < tol) return PolishOutcome::Converged;
            if (stalling) return PolishOutcome::Floor;
        }
        return PolishOutcome::Lost;
    };
    auto polished_root = [&](double& x, double& y) {
        double rr;
        const auto po = newton(x, y, rr);
        return po == PolishOutcome::Converged ||
               (po == PolishOutcome::Floor && rr < polish_floor);
    };

    // A converged root is accepted only if the re-shoot keeps both fields
    // positive up to the boundary; sign-changing roots are remembered by best
    // residual but never upgrade the verdict.  A crossing counts as the
    // boundary zero itself when its distance from R is explained by the
    // endpoint residual over the endpoint slope: a flat tail displaces the
    // apparent zero of the computed field far more than the residual alone
    // suggests.  The band is capped so an interior sign change never passes.
    auto accept_root = [&](double alpha, double beta) -> bool {
        const auto rep = shoot(P, ShootingState{alpha, beta, R}, 1e-11, false);
        bool positive = rep.first_crossing < 0;
        if (!positive && !rep.prof.r.empty()) {
            const bool cu = rep.first_crossing == 0;
            const double res_end = std::fabs(cu ? rep.u_end : rep.v_end);
            const double slope_end = std::fabs(cu ? rep.prof.du.back() : rep.prof.dv.back());
            double band = 1e-6 * R;
            if (slope_end > 0.0)
                band = std::min(1e-3 * R, band + 4.0 * res_end / slope_end);
            positive = rep.crossing_r >= R - band;
        }
        const double ru = std::fabs(rep.u_end), rv = std::fabs(rep.v_end);
        if (positive) {
            out.verdict = Verdict::Found;
            out.positive = true;
            out.alpha = alpha;
            out.beta = beta;
            out.residual_u = ru;
            out.residual_v = rv;
            out.prof = rep.prof;
            return true;
        }
        ++out.trace.n_nonpositive;
        if (ru < out.residual_u) {
            out.alpha = alpha;
            out.beta = beta;
            out.residual_u = ru;
            out.residual_v = rv;
        }
        return false;
    };

    enum class CellOutcome { Root, NoRoot, Unresolved };
    constexpr int refine_m = 8, max_depth = 2, branch_cap = 3;
    double root_x = 0.0, root_y = 0.0;

    std::function<CellOutcome(double, double, double, double, int)> resolve =
        [&](double xlo, double xhi, double ylo, double yhi, int depth) -> CellOutcome {
        double x = 0.5 * (xlo + xhi), y = 0.5 * (ylo + yhi);
        if (polished_root(x, y)) {
            root_x = x;
            root_y = y;
            return CellOutcome::Root;
        }
        if (depth >= max_depth) return CellOutcome::Unresolved;

        ++out.trace.n_refine_scans;
        const int m = refine_m;
        const double nanv = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> Us(std::size_t(m + 1) * (m + 1), nanv), Vs = Us;
        auto sx = [&](int i) { return xlo + (xhi - xlo) * i / m; };
        auto sy = [&](int j) { return ylo + (yhi - ylo) * j / m; };
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                try {
                    const auto bv = detail::boundary_map(
                        P, ShootingState{std::exp(sx(i)), std::exp(sy(j)), R}, 1e-9, 1e-7,
                        40'000);
                    Us[std::size_t(i) * (m + 1) + j] = bv.uR;
                    Vs[std::size_t(i) * (m + 1) + j] = bv.vR;
                } catch (const IntegratorError&) {
                }
            }
        }
        const auto sub = collect_cells(Us, Vs, m + 1, m + 1,
                                       [&](int i) { return std::exp(sx(i)); },
                                       [&](int j) { return std::exp(sy(j)); });
        if (sub.empty()) return CellOutcome::NoRoot;

        bool unresolved = false;
        for (std::size_t k = 0; k < sub.size() && k < std::size_t(branch_cap); ++k) {
            const auto oc = resolve(sx(sub[k].i), sx(sub[k].i + 1), sy(sub[k].j),
                                    sy(sub[k].j + 1), depth + 1);
            if (oc == CellOutcome::Root) return CellOutcome::Root;
            if (oc == CellOutcome::Unresolved) unresolved = true;
        }
        if (unresolved || sub.size() > std::size_t(branch_cap))
            return CellOutcome::Unresolved;
        return CellOutcome::NoRoot;
    };

    bool any_unresolved = false;
    const int polish_cap = 12;
    const double ha = (la1 - la0) / (na - 1), hb = (lb1 - lb0) / (nb - 1);
    for (std::size_t c = 0; c < cells.size() && c < std::size_t(polish_cap); ++c) {
        ++out.trace.n_polished;
        const double xlo = la0 + ha * cells[c].i, ylo = lb0 + hb * cells[c].j;
        const auto oc = resolve(xlo, xlo + ha, ylo, ylo + hb, 0);
        if (oc == CellOutcome::Unresolved) {
            ++out.trace.n_aborted;
            any_unresolved = true;
            continue;
        }
        if (oc == CellOutcome::NoRoot) continue;
        if (accept_root(std::exp(root_x), std::exp(root_y))) return out;
    }

    // --- zero-curve continuation ---------------------------------------------
    // No verified root among the joint cells (often there are none at all):
    // seed the tracer from single-component sign changes of the scan and walk
    // both zero curves in both alpha directions.  A traced intersection is
    // polished by the same Newton and positivity gate; tracer failures leave
    // the verdict to the grid evidence above.
    {
        struct SeedCell {
            double a, b_lo, b_hi;
        };
        auto flip_seeds = [&](const std::vector<double>& F) {
            std::vector<SeedCell> s;
            for (int i = 0; i < na; ++i)
                for (int j = 0; j + 1 < nb; ++j) {
                    const double f0 = F[std::size_t(i) * nb + j];
                    const double f1 = F[std::size_t(i) * nb + j + 1];
                    if (std::isfinite(f0) && std::isfinite(f1) && (f0 > 0.0) != (f1 > 0.0))
                        s.push_back({node_a(i), node_b(j), node_b(j + 1)});
                }
            return s;  // row-major, so ordered by alpha
        };
        for (const int comp : {0, 2}) {
            const auto seeds = flip_seeds(comp == 0 ? U : V);
            if (seeds.empty()) continue;
            const detail::CurveTracer tracer{P,       R, comp, 200'000,
                                             &out.trace.n_curve_steps,
                                             &out.trace.n_curve_shots};
            const std::size_t picks[2] = {0, seeds.size() - 1};
            const int n_picks = seeds.size() > 1 ? 2 : 1;
            for (int pk = 0; pk < n_picks; ++pk) {
                const auto& sd = seeds[picks[pk]];
                double w0;
                const double b0 = tracer.find_flip(sd.a, std::sqrt(sd.b_lo * sd.b_hi), w0);
                if (b0 < 0.0) continue;
                for (const double dir : {+1.0, -1.0}) {
                    double ra, rb;
                    if (!tracer.trace(sd.a, b0, w0, dir, ra, rb)) continue;
                    double x = std::log(ra), y = std::log(rb);
                    if (polished_root(x, y) && accept_root(std::exp(x), std::exp(y))) return out;
                }
            }
        }
    }

    out.verdict = any_unresolved ? Verdict::Inconclusive : Verdict::NotFound;
    return out;
}

// ============================================================================
// Weak-form residual
// ============================================================================

/// Relative weak-form residual of a computed profile pair against one smooth
/// radial test field w (w(R) = 0).  Both equations are tested; the worse one
/// is returned.  Quadrature is 3-point Gauss per profile interval with cubic
/// Hermite reconstruction of the fields, so the measured number reflects the
/// solution, not the mesh.
template <class W, class DW>
double weak_form_residual(const ShootProfiles& prof, const SystemParams& P, W&& w, DW&& dw) {
    if (prof.size() < 3) throw DomainError("weak_form_residual: profile too short");
    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};

    // nodal second derivatives from the equations themselves
    const std::size_t n = prof.size();
    std::vector<double> d2u(n), d2v(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double inv = (P.N - 1) / prof.r[k];
        d2u[k] = -inv * prof.du[k] -
                 (P.lambda * detail::sgn_pow(prof.v[k], P.r) + detail::sgn_pow(prof.v[k], P.p));
        d2v[k] = -inv * prof.dv[k] -
                 (P.mu * detail::sgn_pow(prof.u[k], P.s) + detail::sgn_pow(prof.u[k], P.q));
    }

    double num_u = 0.0, den_u = 0.0, num_v = 0.0, den_v = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = prof.r[k + 1] - prof.r[k];
        if (!(h > 0.0)) continue;
        for (int g = 0; g < 3; ++g) {
            const double rr = prof.r[k] + 0.5 * h * (1.0 + gx[g]);
            const double wt = 0.5 * h * gw[g] * std::pow(rr, P.N - 1);
            const double uv = detail::hermite_eval(prof.r[k], h, prof.u[k], prof.du[k],
                                                   prof.u[k + 1], prof.du[k + 1], rr);
            const double up = detail::hermite_eval(prof.r[k], h, prof.du[k], d2u[k],
                                                   prof.du[k + 1], d2u[k + 1], rr);
            const double vv = detail::hermite_eval(prof.r[k], h, prof.v[k], prof.dv[k],
                                                   prof.v[k + 1], prof.dv[k + 1], rr);
            const double vp = detail::hermite_eval(prof.r[k], h, prof.dv[k], d2v[k],
                                                   prof.dv[k + 1], d2v[k + 1], rr);
            const double wv = w(rr), wp = dw(rr);
            const double fu = P.lambda * detail::sgn_pow(vv, P.r) + detail::sgn_pow(vv, P.p);
            const double fv = P.mu * detail::sgn_pow(uv, P.s) + detail::sgn_pow(uv, P.q);
            num_u += wt * (up * wp - fu * wv);
            den_u += wt * (std::fabs(up * wp) + std::fabs(fu * wv));
            num_v += wt * (vp * wp - fv * wv);
            den_v += wt * (std::fabs(vp * wp) + std::fabs(fv * wv));
        }
    }
    if (!(den_u > 0.0) || !(den_v > 0.0))
        throw DomainError("weak_form_residual: degenerate test field");
    return std::max(std::fabs(num_u) / den_u, std::fabs(num_v) / den_v);
}

} // namespace hamsys
