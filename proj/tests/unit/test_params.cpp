#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamsys/params.hpp"

using namespace hamsys;

TEST_CASE("q_from_p reproduces known hyperbola pairs") {
    CHECK(q_from_p(3, 5.0) == Catch::Approx(5.0).epsilon(1e-14));
    CHECK(q_from_p(4, 3.0) == Catch::Approx(3.0).epsilon(1e-14));
    CHECK(q_from_p(3, 3.0) == Catch::Approx(11.0).epsilon(1e-14));
    // p = 2.5 pairs with q = 20: 1/3.5 + 1/21 = 1/3.
    CHECK(q_from_p(3, 2.5) == Catch::Approx(20.0).epsilon(1e-14));
    CHECK(q_from_p(5, 2.0) == Catch::Approx(1.0 / (0.6 - 1.0 / 3.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("q_from_p is an involution and lands on the hyperbola") {
    for (int N : {3, 4, 5, 6}) {
        const double p_lo = 2.0 / (N - 2) + 0.05;
        for (double p = p_lo; p < p_lo + 9.0; p += 0.37) {
            const double q = q_from_p(N, p);
            CAPTURE(N, p, q);
            CHECK(is_critical_pair(N, p, q, 1e-12));
            CHECK(q_from_p(N, q) == Catch::Approx(p).epsilon(1e-12));
        }
    }
}

TEST_CASE("q_from_p rejects subcritical p") {
    CHECK_THROWS_AS(q_from_p(3, 2.0), DomainError);
    CHECK_THROWS_AS(q_from_p(3, 1.99), DomainError);
    CHECK_THROWS_AS(q_from_p(4, 1.0), DomainError);
    CHECK_THROWS_AS(q_from_p(2, 3.0), DomainError);
    CHECK_NOTHROW(q_from_p(3, 2.01));
}

TEST_CASE("validate flags each admissibility violation") {
    SystemParams P;  // defaults: N=3, p=q=5, r=s=1, lambda=mu=1
    CHECK(validate(P).empty());

    SystemParams bad = P;
    bad.r = 6.0;  // r >= p
    CHECK_FALSE(validate(bad).empty());

    bad = P; bad.s = -1.0;
    CHECK_FALSE(validate(bad).empty());

    bad = P; bad.r = 0.5; bad.s = 1.0;  // rs < 1
    CHECK_FALSE(validate(bad).empty());

    bad = P; bad.lambda = 0.0;
    CHECK_FALSE(validate(bad).empty());

    bad = P; bad.q = 4.0;  // off the hyperbola
    CHECK_FALSE(validate(bad).empty());
    CHECK(validate(bad, /*require_critical=*/false).empty());

    CHECK_THROWS_AS(validate_or_throw(bad), ValidationError);
}

TEST_CASE("smallness thresholds: closed-form spot check at rs = 1") {
    // r=1, p=5, C_r=1, |Omega|=1: bound on lambda mu is 2^{-4/6}/2^2 = 2^{-8/3}.
    SystemParams P;
    P.N = 3; P.p = 5.0; P.q = 5.0; P.r = 1.0; P.s = 1.0;
    P.lambda = 0.1; P.mu = 0.1;
    const auto rep = smallness_thresholds(P, 1.0, 1.0, 1.0);
    CHECK(rep.constrained);
    CHECK(rep.bound_r == Catch::Approx(std::pow(2.0, -8.0 / 3.0)).epsilon(1e-14));
    CHECK(rep.bound_s == Catch::Approx(std::pow(2.0, -8.0 / 3.0)).epsilon(1e-14));
    CHECK(rep.lhs_r == Catch::Approx(0.01).epsilon(1e-14));
    CHECK(rep.ok);  // 0.01 < 0.157

    P.lambda = 1.0; P.mu = 1.0;
    CHECK_FALSE(smallness_thresholds(P, 1.0, 1.0, 1.0).ok);  // 1 > 2^{-8/3}
}

TEST_CASE("smallness thresholds: rs > 1 is unconstrained") {
    SystemParams P;
    P.N = 3; P.p = 5.0; P.q = 5.0; P.r = 2.0; P.s = 1.0;  // rs = 2
    P.lambda = 100.0; P.mu = 100.0;
    const auto rep = smallness_thresholds(P, 1.0, 1.0, 1.0);
    CHECK_FALSE(rep.constrained);
    CHECK(rep.ok);
}

TEST_CASE("N=3 classification: unconditional region is exactly p<=7/2 or p>=8") {
    for (double p = 2.05; p < 12.0; p += 0.05) {
        const auto v = classify_N3(p, 1.0, std::max(1.0, 1.5 / 1.0));
        CAPTURE(p);
        const bool should_be_noncritical = p <= 3.5 + 1e-9 || p >= 8.0 - 1e-9;
        CHECK((v.kind == RegionKind::NoncriticalByTheorem1) == should_be_noncritical);
    }
}

TEST_CASE("N=3 classification: conditional branches") {
    // comprs3 example: p=4, q=6.5, r=1, s=4: s+1=5 > (7.5/5)(4-1)=4.5.
    auto v = classify_N3(4.0, 1.0, 4.0);
    CHECK(v.kind == RegionKind::ConditionalExistence);
    CHECK(v.q == Catch::Approx(6.5).epsilon(1e-14));
    CHECK(v.witness.find("s > 2") != std::string::npos);

    // r < 2 branch: p=3.6, r=1 < 1/(0.6) = 1.667.
    v = classify_N3(3.6, 1.0, 1.0);
    CHECK(v.kind == RegionKind::ConditionalExistence);
    CHECK(v.witness.find("1/(p-3)") != std::string::npos);

    // (r,s) = (1/2, 2) special pair.
    v = classify_N3(6.0, 0.5, 2.0);
    CHECK(v.kind == RegionKind::ConditionalExistence);

    // r > 2 quadratic branch: p=7.9, r=7.5: 56.25 - 51.75 + 1 > 0.
    v = classify_N3(7.9, 7.5, 1.0);
    CHECK(v.kind == RegionKind::ConditionalExistence);
    CHECK(v.witness.find("r > 2") != std::string::npos);

    // Interior point with no applicable criterion.
    v = classify_N3(5.0, 1.0, 1.0);
    CHECK(v.kind == RegionKind::Unknown);

    // r = 2 alternative is vacuous inside the window.
    v = classify_N3(5.0, 2.0, 0.5);
    CHECK(v.kind == RegionKind::Unknown);
    CHECK(v.witness.find("vacuous") != std::string::npos);
}

TEST_CASE("classification validates (r,s) admissibility") {
    CHECK_THROWS_AS(classify_N3(5.0, 0.5, 1.0), ValidationError);   // rs < 1
    CHECK_THROWS_AS(classify_N3(5.0, 6.0, 1.0), ValidationError);   // r >= p
}

TEST_CASE("region verdict for N >= 4 cites Theorem 1") {
    const auto v = region_verdict(4, 3.0, 1.0, 1.0);
    CHECK(v.kind == RegionKind::NoncriticalByTheorem1);
    CHECK(v.q == Catch::Approx(3.0));
    CHECK(v.witness == "N >= 4");
}
