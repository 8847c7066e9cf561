#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamsys/constants.hpp"
#include "hamsys/ground_state.hpp"
#include "hamsys/mesh.hpp"
#include "hamsys/test_function.hpp"
#include "support/closed_forms.hpp"
#include "support/quadrature.hpp"

using namespace hamsys;

TEST_CASE("mesh weights are positive and sum to the ball volume") {
    for (int N : {3, 4, 5}) {
        const double R = 1.7;
        const auto m = make_mesh(N, R);
        double sum = 0.0, wmin = 1e300;
        for (double wi : m.w) {
            sum += wi;
            wmin = std::min(wmin, wi);
        }
        CHECK(wmin > 0.0);
        CHECK(sum == Catch::Approx(ball_volume(N, R)).epsilon(1e-13));
        CHECK(m.r.front() == 0.0);
        CHECK(m.r.back() == R);
    }
}

TEST_CASE("mesh integrates radial monomials and a Gaussian accurately") {
    const int N = 3;
    const double R = 2.0;
    const auto m = make_mesh(N, R);

    // |x|^2 over B_R: area * R^{N+2}/(N+2)
    const double exact2 = unit_sphere_area(N) * std::pow(R, N + 2) / (N + 2);
    CHECK(m.integrate_fn([](double r) { return r * r; }) ==
          Catch::Approx(exact2).epsilon(1e-5));

    const double gexact = oracle::adaptive_simpson(
        [&](double r) { return unit_sphere_area(N) * r * r * std::exp(-r * r); }, 0.0, R,
        1e-13);
    CHECK(m.integrate_fn([](double r) { return std::exp(-r * r); }) ==
          Catch::Approx(gexact).epsilon(5e-5));
}

TEST_CASE("count_below counts strictly smaller radii") {
    const auto m = make_mesh(3, 1.0);
    CHECK(m.count_below(0.0) == 0);
    CHECK(m.count_below(1e-6) == 1);          // just the origin
    CHECK(m.count_below(1e-4) >= 32);         // two decades of log band
    CHECK(m.count_below(2.0) == m.size());
}

TEST_CASE("mesh validation") {
    CHECK_THROWS_AS(make_mesh(2, 1.0), DomainError);
    CHECK_THROWS_AS(make_mesh(3, -1.0), DomainError);
}

// ============================================================================
// Cutoff
// ============================================================================

TEST_CASE("cutoff is a C^3 bridge from 1 to 0") {
    const Cutoff xi{0.8};
    CHECK(xi.value(0.0) == 1.0);
    CHECK(xi.value(0.4) == 1.0);
    CHECK(xi.value(0.8) == 0.0);
    CHECK(xi.value(1.0) == 0.0);
    CHECK(xi.value(0.6) == Catch::Approx(0.5).margin(1e-12));  // odd-symmetric step

    // derivatives against central differences
    const double h = 1e-5;
    for (double r : {0.45, 0.6, 0.75}) {
        const double fd1 = (xi.value(r + h) - xi.value(r - h)) / (2 * h);
        const double fd2 = (xi.value(r + h) - 2 * xi.value(r) + xi.value(r - h)) / (h * h);
        CHECK(xi.deriv(r) == Catch::Approx(fd1).margin(1e-7));
        CHECK(xi.second(r) == Catch::Approx(fd2).margin(1e-4));
    }
    // smooth join: derivatives vanish at both ends of the bridge
    CHECK(xi.deriv(0.4 + 1e-9) == Catch::Approx(0.0).margin(1e-20));
    CHECK(xi.second(0.8 - 1e-9) == Catch::Approx(0.0).margin(1e-12));
}

// ============================================================================
// Test function
// ============================================================================

namespace {
const RadialProfile& gs35() {
    static const RadialProfile p = solve_ground_state(3, 5.0, 5.0);
    return p;
}
} // namespace

TEST_CASE("test function matches the closed form in the core region") {
    const auto m = make_mesh(3, 1.0);
    const double delta = 0.1;
    const auto tf = build_test_function(m, gs35(), delta, 1.0);
    const double amp = std::pow(delta, -0.5);  // N/(q+1) = 1/2 here

    double worst_u = 0.0, worst_lap = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double r = m.r[i];
        if (r > 0.49) break;  // xi == 1 region
        const double y = r / delta;
        worst_u = std::max(worst_u, std::fabs(tf.U[i] - amp * oracle::instanton3(y)));
        const double lap = -amp * std::pow(oracle::instanton3(y), 5.0) / (delta * delta);
        worst_lap = std::max(worst_lap, std::fabs(tf.lapU[i] - lap) / std::fabs(lap));
    }
    CHECK(worst_u < 1e-6);
    CHECK(worst_lap < 1e-6);

    // vanishes at and beyond the cutoff radius
    CHECK(tf.U.back() == 0.0);
    CHECK(tf.lapU.back() == 0.0);
}

TEST_CASE("nodal Laplacian is consistent with integration by parts") {
    const auto m = make_mesh(3, 1.0);
    const auto tf = build_test_function(m, gs35(), 0.1, 1.0);

    // W = (1 - r^2)^2 vanishes on the boundary along with its gradient, so
    // int (Delta U) W = int U (Delta W) with Delta W = -4(1 - r^2) + 8 r^2
    //                                            + (N-1)/r * (-4r(1 - r^2))
    std::vector<double> lhs(m.size()), rhs(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double r = m.r[i], r2 = r * r;
        const double W = (1.0 - r2) * (1.0 - r2);
        const double lapW = -4.0 * (1.0 - r2) + 8.0 * r2 + (3 - 1) * (-4.0 * (1.0 - r2));
        lhs[i] = tf.lapU[i] * W;
        rhs[i] = tf.U[i] * lapW;
    }
    const double a = m.integrate(lhs), b = m.integrate(rhs);
    CHECK(a == Catch::Approx(b).epsilon(1e-4));
}

TEST_CASE("test function validation") {
    const auto m = make_mesh(3, 1.0);
    CHECK_THROWS_AS(build_test_function(m, gs35(), -0.1, 1.0), DomainError);
    CHECK_THROWS_AS(build_test_function(m, gs35(), 0.1, 1.5), DomainError);
    // rho/delta beyond the stored profile
    CHECK_THROWS_AS(build_test_function(m, gs35(), 1e-5, 1.0), DomainError);
    // concentration scale under-resolved on a deliberately coarse mesh
    const auto coarse = make_mesh(3, 1.0, MeshSpec{1e-2, 8, 8});
    CHECK_THROWS_AS(build_test_function(coarse, gs35(), 0.05, 1.0), MeshError);
}
