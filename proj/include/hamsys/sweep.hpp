#pragma once

// Existence sweeps: run solve_ball over a parameter grid and set the verdicts
// beside the region classification, as region-map evidence.  Grid axes are
// explicit value lists; an empty axis means "hold the base value".  q is never
// a free axis: it is slaved to the critical partner of p (scaled by q_factor
// for deliberately subcritical control runs).
//
// Per-point failures of any kind are recorded as Inconclusive; the sweep
// itself never throws on a point.

#include <string>
#include <vector>

#include "hamsys/params.hpp"
#include "hamsys/shooting.hpp"

namespace hamsys {

struct SweepGrid {
    std::vector<double> p, r, s, lambda, mu, R;
    double q_factor = 1.0;  // q = q_factor * q_from_p(N, p)
};

struct SweepPoint {
    SystemParams params;  // fully resolved (q included)
    double R = 1.0;
    Verdict verdict = Verdict::Inconclusive;
    double alpha = 0.0, beta = 0.0;
    double residual_u = 0.0, residual_v = 0.0;
    RegionVerdict region;  // what the classification says, side by side
    std::string note;      // per-point failure text, empty when clean
    SolveTrace trace;
};

struct SweepResult {
    SweepGrid grid;  // provenance
    SearchBox box;
    double tol = 0.0;
    std::vector<SweepPoint> points;
};

inline SweepResult existence_sweep(const SystemParams& base, const SweepGrid& grid,
                                   const SearchBox& box = {}, double tol = 1e-9) {
    SweepResult out;
    out.grid = grid;
    out.box = box;
    out.tol = tol;

    const bool all_empty = grid.p.empty() && grid.r.empty() && grid.s.empty() &&
                           grid.lambda.empty() && grid.mu.empty() && grid.R.empty();
    if (all_empty) return out;

    auto axis = [](const std::vector<double>& a, double fallback) {
        return a.empty() ? std::vector<double>{fallback} : a;
    };
    const auto ps = axis(grid.p, base.p);
    const auto rs = axis(grid.r, base.r);
    const auto ss = axis(grid.s, base.s);
    const auto ls = axis(grid.lambda, base.lambda);
    const auto ms = axis(grid.mu, base.mu);
    const auto Rs = axis(grid.R, 1.0);

    for (double p : ps)
        for (double r : rs)
            for (double s : ss)
                for (double lam : ls)
                    for (double mu : ms)
                        for (double R : Rs) {
                            SweepPoint pt;
                            pt.params = base;
                            pt.params.p = p;
                            pt.params.r = r;
                            pt.params.s = s;
                            pt.params.lambda = lam;
                            pt.params.mu = mu;
                            pt.R = R;
                            try {
                                pt.params.q = grid.q_factor * q_from_p(base.N, p);
                                try {
                                    pt.region = region_verdict(base.N, p, r, s);
                                } catch (const std::exception& e) {
                                    pt.region.kind = RegionKind::Unknown;
                                    pt.region.witness = e.what();
                                }
                                const auto res = solve_ball(pt.params, R, box, tol);
                                pt.verdict = res.verdict;
                                pt.alpha = res.alpha;
                                pt.beta = res.beta;
                                if (std::isfinite(res.residual_u)) {
                                    pt.residual_u = res.residual_u;
                                    pt.residual_v = res.residual_v;
                                }
                                pt.trace = res.trace;
                            } catch (const std::exception& e) {
                                pt.verdict = Verdict::Inconclusive;
                                pt.note = e.what();
                            }
                            out.points.push_back(std::move(pt));
                        }
    return out;
}

} // namespace hamsys
