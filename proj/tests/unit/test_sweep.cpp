#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamsys/constants.hpp"
#include "hamsys/sweep.hpp"

using namespace hamsys;

namespace {

SystemParams sweep_base() {
    SystemParams P;
    P.N = 3;
    P.p = P.q = 5.0;
    P.r = P.s = 1.0;
    P.lambda = P.mu = 0.05 * pi * pi;
    return P;
}

} // namespace

TEST_CASE("critical-hyperbola sweep separates outer and window exponents") {
    SweepGrid grid;
    grid.p = {3.0, 3.5, 4.0, 4.5, 5.0, 6.5, 8.0};
    const auto res = existence_sweep(sweep_base(), grid);

    REQUIRE(res.points.size() == 7);
    const Verdict expect[7] = {Verdict::Found,    Verdict::Found,    Verdict::NotFound,
                               Verdict::NotFound, Verdict::NotFound, Verdict::NotFound,
                               Verdict::Found};
    for (int k = 0; k < 7; ++k) {
        CAPTURE(k, res.points[k].params.p);
        CHECK(res.points[k].params.p == grid.p[k]);
        CHECK(res.points[k].verdict == expect[k]);
        CHECK(res.points[k].note.empty());
        // q is slaved to the critical partner of p
        CHECK(res.points[k].params.q ==
              Catch::Approx(q_from_p(3, grid.p[k])).epsilon(1e-12));
        CHECK(res.points[k].trace.n_scan == 4096);
    }

    // outer exponents carry the unconditional region tag, the window does not
    for (int k : {0, 1, 6})
        CHECK(res.points[k].region.kind == RegionKind::NoncriticalByTheorem1);
    for (int k : {2, 3, 4, 5})
        CHECK(res.points[k].region.kind == RegionKind::Unknown);

    for (int k : {0, 1, 6}) {
        CHECK(res.points[k].alpha > 0.0);
        CHECK(res.points[k].beta > 0.0);
        CHECK(res.points[k].residual_u < 1e-5);
        CHECK(res.points[k].residual_v < 1e-5);
    }

    // (p, q) = (3.5, 8) and (8, 3.5) are the same system with the roles of u
    // and v swapped, so the located center values must mirror.
    CHECK(res.points[1].alpha == Catch::Approx(res.points[6].beta).epsilon(1e-5));
    CHECK(res.points[1].beta == Catch::Approx(res.points[6].alpha).epsilon(1e-5));
}

TEST_CASE("subcritical control sweep finds a root at every grid point") {
    SweepGrid grid;
    grid.p = {3.0, 5.0, 8.0};
    grid.q_factor = 0.9;
    const auto res = existence_sweep(sweep_base(), grid);

    REQUIRE(res.points.size() == 3);
    for (const auto& pt : res.points) {
        CAPTURE(pt.params.p);
        CHECK(pt.verdict == Verdict::Found);
        CHECK(pt.params.q == Catch::Approx(0.9 * q_from_p(3, pt.params.p)).epsilon(1e-12));
        CHECK(pt.alpha > 0.0);
    }

    // the sweep is deterministic: a second run reproduces every field bitwise
    const auto res2 = existence_sweep(sweep_base(), grid);
    REQUIRE(res2.points.size() == res.points.size());
    for (std::size_t k = 0; k < res.points.size(); ++k) {
        CHECK(res.points[k].verdict == res2.points[k].verdict);
        CHECK(res.points[k].alpha == res2.points[k].alpha);
        CHECK(res.points[k].beta == res2.points[k].beta);
        CHECK(res.points[k].residual_u == res2.points[k].residual_u);
        CHECK(res.points[k].residual_v == res2.points[k].residual_v);
    }
}

TEST_CASE("missing axes fall back to the base parameter point") {
    SweepGrid grid;
    grid.lambda = {0.5 * pi * pi};
    grid.mu = {0.5 * pi * pi};
    SystemParams base = sweep_base();
    const auto res = existence_sweep(base, grid);

    REQUIRE(res.points.size() == 1);
    const auto& pt = res.points.front();
    CHECK(pt.params.p == base.p);
    CHECK(pt.params.r == base.r);
    CHECK(pt.params.lambda == Catch::Approx(0.5 * pi * pi));
    CHECK(pt.params.mu == Catch::Approx(0.5 * pi * pi));
    CHECK(pt.R == 1.0);
    CHECK(pt.verdict == Verdict::Found);
    // the symmetric system has a symmetric ground state
    CHECK(pt.alpha == Catch::Approx(pt.beta).epsilon(1e-9));
}

TEST_CASE("an all-empty grid yields an empty sweep") {
    const auto res = existence_sweep(sweep_base(), SweepGrid{});
    CHECK(res.points.empty());
}
