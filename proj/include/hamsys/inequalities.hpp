#pragma once

// Sampled verification of the sharp bounds satisfied by f^{-1} and Fbar.
// Each check sweeps a signed log grid, records the worst relative slack
// (min over samples of RHS - LHS in the asserted direction, normalized by the
// local scale), and passes iff that slack is >= -1e-10.
//
// Implemented bounds, with T* = 2 lambda^{p/(p-r)} and m(t) = f^{-1}(t) t:
//  inv-upper         f^{-1}(tau) < tau^{1/p}  and  f^{-1}(tau) < (tau/lambda)^{1/r}   (strict, tau > 0)
//  Fbar-upper        Fbar(tau) <= p/(p+1) |tau|^{(p+1)/p}
//                    Fbar(tau) <= r/(r+1) lambda^{-1/r} |tau|^{(r+1)/r}
//  Fbar-lower-s      Fbar(t) >= m(t)/(s+1)                    (needs rs >= 1)
//  inv-lower         f^{-1}(t) >= (t/(2 lambda))^{1/r}  for 0 < t <= T*
//                    f^{-1}(t) >= (t/2)^{1/p}           for t >= T*
//  Fbar-lower        Fbar(t) >= r/(r+1) lambda^{-1/r} (|t|/2)^{(r+1)/r} + p/(p+1) (|t|/(2 lambda))^{(p+1)/r},  |t| <= T*
//                    Fbar(t) >= r/(r+1) lambda (|t|/2)^{(r+1)/p} + p/(p+1) (|t|/2)^{(p+1)/p},                  |t| >= T*
//  Fbar-m-gap        Fbar(t) - m(t)/(s+1) >= tau_c |t|^{(p+1)/p} for |t| >= T*,
//                    tau_c = (ps-1) / (2^{(p+1)/p} (p+1) (s+1));  needs ps > 1, else skipped
//  m-shift           m(a+b) <= m(a) + (r+1)/r |b| max(|f^{-1}(a)|, |f^{-1}(a+b)|)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hamsys/errors.hpp"
#include "hamsys/perturbed_power.hpp"

namespace hamsys {

struct SampleSpec {
    std::size_t n = 10000;      // grid size (per sign)
    double t_min = 1e-6;
    double t_max = 1e6;
};

struct InequalityReport {
    std::string lemma;
    std::size_t n_samples = 0;
    double worst_slack = 0.0;   // relative; negative means violated
    double worst_at = 0.0;      // sample where the worst slack occurred
    bool strict = false;        // inequality asserted strictly
    bool skipped = false;
    std::string note;
    bool pass = false;
};

namespace detail {

struct SlackAcc {
    double worst = std::numeric_limits<double>::infinity();
    double at = 0.0;
    // slack of "lhs <= rhs", normalized by the quantity scale
    void feed(double lhs, double rhs, double where) {
        const double sc = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        const double s = (rhs - lhs) / sc;
        if (s < worst) { worst = s; at = where; }
    }
};

inline InequalityReport finish(const std::string& name, const SlackAcc& acc,
                               std::size_t n, bool strict) {
    InequalityReport rep;
    rep.lemma = name;
    rep.n_samples = n;
    rep.worst_slack = acc.worst;
    rep.worst_at = acc.at;
    rep.strict = strict;
    // Strict bounds admit slack 0 at double resolution: near the branch ends
    // the true gap (e.g. ~|tau|^{(p-r)/r} relative) underflows the mantissa.
    rep.pass = strict ? acc.worst >= 0.0 : acc.worst >= -1e-10;
    if (strict && acc.worst == 0.0)
        rep.note = "gap below double resolution at worst sample";
    return rep;
}

} // namespace detail

/// Run the full suite for the map `F` with companion exponent `s`.
inline std::vector<InequalityReport> check_inequalities(const PerturbedPower& F,
                                                        double s,
                                                        const SampleSpec& spec = {}) {
    if (!(spec.t_min > 0.0) || !(spec.t_max > spec.t_min) || spec.n < 8)
        throw DomainError("check_inequalities: bad sample spec");
    const double lam = F.lambda(), r = F.r(), p = F.p();
    const double Tst = F.crossover();

    // Signed log grid with the crossover and its neighborhood pinned in.
    std::vector<double> grid;
    grid.reserve(2 * spec.n + 8);
    const double lstep = std::log(spec.t_max / spec.t_min) / double(spec.n - 1);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double t = spec.t_min * std::exp(lstep * double(i));
        grid.push_back(i % 2 == 0 ? t : -t);  // alternate signs across the sweep
    }
    for (double t : {Tst, -Tst, Tst * (1.0 - 1e-8), Tst * (1.0 + 1e-8),
                     std::pow(lam, 1.0 / (p - r)), 2.0 * std::pow(lam, 1.0 / (p - r))})
        grid.push_back(t);

    detail::SlackAcc inv_upper, fbar_upper, fbar_lower_s, inv_lower, fbar_lower, fbar_m_gap;

    for (double t : grid) {
        const double a = std::fabs(t);
        if (a == 0.0) continue;
        const double z = F.f_inv(t);       // odd
        const double az = std::fabs(z);
        const double fb = lam * r / (r + 1.0) * std::pow(az, r + 1.0) +
                          p / (p + 1.0) * std::pow(az, p + 1.0);  // Fbar from z
        const double m = z * t;            // = az * a

        inv_upper.feed(az, std::pow(a, 1.0 / p), t);
        inv_upper.feed(az, std::pow(a / lam, 1.0 / r), t);

        fbar_upper.feed(fb, p / (p + 1.0) * std::pow(a, (p + 1.0) / p), t);
        fbar_upper.feed(fb, r / (r + 1.0) * std::pow(lam, -1.0 / r) * std::pow(a, (r + 1.0) / r), t);

        fbar_lower_s.feed(m / (s + 1.0), fb, t);

        if (a <= Tst) inv_lower.feed(std::pow(a / (2.0 * lam), 1.0 / r), az, t);
        if (a >= Tst) inv_lower.feed(std::pow(a / 2.0, 1.0 / p), az, t);

        if (a <= Tst)
            fbar_lower.feed(r / (r + 1.0) * std::pow(lam, -1.0 / r) * std::pow(a / 2.0, (r + 1.0) / r) +
                                p / (p + 1.0) * std::pow(a / (2.0 * lam), (p + 1.0) / r),
                            fb, t);
        else
            fbar_lower.feed(r / (r + 1.0) * lam * std::pow(a / 2.0, (r + 1.0) / p) +
                                p / (p + 1.0) * std::pow(a / 2.0, (p + 1.0) / p),
                            fb, t);

        if (p * s > 1.0 && a >= Tst) {
            const double tau_c = (p * s - 1.0) /
                                 (std::pow(2.0, (p + 1.0) / p) * (p + 1.0) * (s + 1.0));
            fbar_m_gap.feed(m / (s + 1.0) + tau_c * std::pow(a, (p + 1.0) / p), fb, t);
        }
    }

    std::vector<InequalityReport> out;
    out.push_back(detail::finish("inv-upper", inv_upper, grid.size(), /*strict=*/true));
    out.push_back(detail::finish("Fbar-upper", fbar_upper, grid.size(), false));
    {
        auto rep = detail::finish("Fbar-lower-s", fbar_lower_s, grid.size(), false);
        if (r * s < 1.0 - 1e-12) {
            rep.skipped = true;
            rep.pass = true;
            rep.note = "requires rs >= 1";
        }
        out.push_back(rep);
    }
    out.push_back(detail::finish("inv-lower", inv_lower, grid.size(), false));
    out.push_back(detail::finish("Fbar-lower", fbar_lower, grid.size(), false));
    {
        auto rep = detail::finish("Fbar-m-gap", fbar_m_gap, grid.size(), false);
        if (!(p * s > 1.0)) {
            rep.skipped = true;
            rep.pass = true;
            rep.note = "requires ps > 1 (cannot occur for admissible (r,s))";
        }
        out.push_back(rep);
    }

    // m(a+b) shift bound over deterministic sample pairs.
    {
        detail::SlackAcc acc;
        std::size_t pairs = 0;
        const std::size_t n = grid.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double alpha = grid[i];
            for (std::size_t k : {n / 2 + i / 2, n - 1 - i, (i + n / 3) % n}) {
                const double beta = 0.7 * grid[k % n];
                const double za = F.f_inv(alpha), zab = F.f_inv(alpha + beta);
                const double lhs = zab * (alpha + beta);
                const double rhs = za * alpha +
                                   (r + 1.0) / r * std::fabs(beta) *
                                       std::max(std::fabs(za), std::fabs(zab));
                acc.feed(lhs, rhs, alpha);
                ++pairs;
            }
        }
        out.push_back(detail::finish("m-shift", acc, pairs, false));
    }
    return out;
}

} // namespace hamsys
