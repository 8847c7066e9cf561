#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamsys/functional.hpp"
#include "hamsys/ground_state.hpp"
#include "support/closed_forms.hpp"

using namespace hamsys;

namespace {
const RadialProfile& gs35() {
    static const RadialProfile p = solve_ground_state(3, 5.0, 5.0);
    return p;
}
const RadialProfile& gs43() {
    static const RadialProfile p = solve_ground_state(4, 3.0, 3.0);
    return p;
}
const RadialMesh& mesh3() {
    static const RadialMesh m = make_mesh(3, 1.0);
    return m;
}
const RadialMesh& mesh4() {
    static const RadialMesh m = make_mesh(4, 1.0);
    return m;
}
double S35() { return std::pow(oracle::instanton3_L6_mass(), 2.0 / 3.0); }
double S43() { return std::sqrt(oracle::instanton4_L4_mass()); }
} // namespace

TEST_CASE("laplacian quasi-norm of the rescaled profile approaches the Sobolev constant") {
    // The un-cut rescaling carries the constant: int |Delta V|^{(p+1)/p} -> S
    // (integral form), with only profile-tail and normalization corrections.
    // The cutoff version keeps an O(1) bridge surcharge at any fixed delta/rho,
    // since the bridge sees the harmonic-range tail of the profile; it must sit
    // strictly above the principal value and decrease with the concentration.
    const double rho = 0.5;

    SECTION("N=3, p=q=5") {
        const SystemParams P{3, 5.0, 5.0, 1.0, 1.0, 1.0, 1.0};
        const double S_int = std::pow(S35(), 6.0 / 5.0);
        double prev_err = 1e30, prev_kp = 1e30;
        for (const double dr : {0.1, 0.03, 0.01}) {
            const auto v = normalize_test_function(
                mesh3(), build_test_function(mesh3(), gs35(), dr * rho, rho), P);
            const double err = std::fabs(v.Kp_principal - S_int);
            INFO("delta/rho = " << dr << "  Kp_principal = " << v.Kp_principal
                                << "  Kp = " << v.Kp);
            CHECK(err < 0.01 * S_int);
            CHECK(err < prev_err);        // monotone approach
            CHECK(v.Kp > v.Kp_principal); // bridge surcharge is positive
            CHECK(v.Kp < prev_kp);        // and shrinks with delta
            prev_err = err;
            prev_kp = v.Kp;
        }
    }

    SECTION("N=4, p=q=3") {
        const SystemParams P{4, 3.0, 3.0, 1.0, 1.0, 1.0, 1.0};
        const double S_int = std::pow(S43(), 4.0 / 3.0);
        double prev_err = 1e30;
        for (const double dr : {0.1, 0.03, 0.01}) {
            const auto v = normalize_test_function(
                mesh4(), build_test_function(mesh4(), gs43(), dr * rho, rho), P);
            const double err = std::fabs(v.Kp_principal - S_int);
            INFO("delta/rho = " << dr << "  Kp_principal = " << v.Kp_principal);
            CHECK(err < (dr > 0.05 ? 0.03 : 0.01) * S_int);
            CHECK(err < prev_err);
            CHECK(v.Kp > v.Kp_principal);
            prev_err = err;
        }
    }
}

TEST_CASE("ray energy has mountain-pass shape and the identity chain agrees") {
    const SystemParams P{3, 5.0, 5.0, 1.0, 1.0, 1.0, 1.0};
    const auto rep = mp_level(mesh3(), gs35(), P, S35(), 0.1, 1.0);

    CHECK(rep.n_roots == 1);
    CHECK(rep.level > 0.0);
    CHECK(std::fabs(rep.level_identity - rep.level) < 1e-6 * rep.level);

    // t_star is a genuine local max of the ray energy
    const PerturbedPower f(P.lambda, P.r, P.p);
    const auto tf = build_test_function(mesh3(), gs35(), 0.1, 1.0);
    const auto v = normalize_test_function(mesh3(), tf, P);
    const double at = energy_IF(mesh3(), v, f, P, rep.t_star);
    CHECK(at >= energy_IF(mesh3(), v, f, P, rep.t_star * 1.001));
    CHECK(at >= energy_IF(mesh3(), v, f, P, rep.t_star * 0.999));
    CHECK(energy_IF(mesh3(), v, f, P, rep.t_star * 100.0) < 0.0);

    // threshold formula collapses to (2/N) S_norm^{N/2}
    CHECK(rep.threshold ==
          Catch::Approx(2.0 / 3.0 * std::pow(S35(), 1.5)).epsilon(1e-12));
}

TEST_CASE("mountain-pass reports at the N=4 anchor are internally consistent") {
    // The bridge surcharge keeps the ray maximum above the compactness
    // threshold at these concentrations (margins are negative and reported as
    // such); what must hold regardless: the closed threshold formula, machine-
    // precision agreement of the two level evaluations, margins improving
    // monotonically as the concentration tightens, a single ray maximum, and
    // the maximizing scale staying in a delta-independent bracket while
    // decreasing toward the unperturbed bound from above.
    const SystemParams P{4, 3.0, 3.0, 1.0, 1.0, 1.0, 1.0};
    const double rho = 0.5;
    const double S_int = std::pow(S43(), 4.0 / 3.0);

    double margins[3], tstars[3];
    const double dr[3] = {0.1, 0.05, 0.02};
    for (int k = 0; k < 3; ++k) {
        const auto rep = mp_level(mesh4(), gs43(), P, S43(), dr[k] * rho, rho);
        INFO("delta/rho = " << dr[k] << " margin = " << rep.margin
                            << " t_star = " << rep.t_star << " t_bound = " << rep.t_bound);
        CHECK(rep.threshold ==
              Catch::Approx(0.5 * std::pow(S_int, 1.5)).epsilon(1e-12));
        CHECK(std::fabs(rep.level_identity - rep.level) < 1e-10 * rep.level);
        CHECK(rep.n_roots == 1);
        CHECK(rep.level > 0.0);
        CHECK(rep.margin == rep.threshold - rep.level);
        CHECK(rep.t_star > rep.t_bound);  // Kp above S forces the scale up
        margins[k] = rep.margin;
        tstars[k] = rep.t_star;
    }
    CHECK(margins[2] > margins[1]);
    CHECK(margins[1] > margins[0]);
    CHECK(tstars[2] < tstars[1]);
    CHECK(tstars[1] < tstars[0]);
    for (int k = 0; k < 3; ++k) {
        CHECK(tstars[k] > 0.5 * tstars[1]);
        CHECK(tstars[k] < 2.0 * tstars[1]);
    }
}

TEST_CASE("weighted stationarity integral sits strictly below its pure-power cap") {
    // f_inv(z) z < |z|^{(p+1)/p}: the inversion's small-argument branch can
    // only lower the stationarity integral relative to the quasi-norm, which
    // is the mechanism that eventually absorbs the bridge surcharge.
    const SystemParams P{4, 3.0, 3.0, 1.0, 1.0, 1.0, 1.0};
    const PerturbedPower f(P.lambda, P.r, P.p);
    const auto v = normalize_test_function(
        mesh4(), build_test_function(mesh4(), gs43(), 0.01, 0.5), P);
    for (const double t : {0.5, 1.0, 3.0}) {
        double acc = 0.0;
        for (std::size_t i = 0; i < mesh4().size(); ++i)
            if (v.lapV[i] != 0.0)
                acc += mesh4().w[i] * f.f_inv(t * v.lapV[i]) * t * v.lapV[i];
        INFO("t = " << t);
        CHECK(acc < std::pow(t, 4.0 / 3.0) * v.Kp);
        CHECK(acc > 0.0);
    }
}

TEST_CASE("mp_level validates its inputs") {
    const SystemParams bad{3, 5.0, 4.9, 1.0, 1.0, 1.0, 1.0};  // off the hyperbola
    CHECK_THROWS_AS(mp_level(mesh3(), gs35(), bad, S35(), 0.1, 1.0), ValidationError);
    const SystemParams P4{4, 3.0, 3.0, 1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(mp_level(mesh3(), gs35(), P4, S43(), 0.1, 1.0), DomainError);
}
