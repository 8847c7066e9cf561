#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hamsys/perturbed_power.hpp"
#include "support/closed_forms.hpp"
#include "support/quadrature.hpp"

using namespace hamsys;

TEST_CASE("f_inv matches the Cardano oracle for lambda=1, r=1, p=3") {
    PerturbedPower F(1.0, 1.0, 3.0);
    CHECK(F.f_inv(10.0) == Catch::Approx(2.0).epsilon(1e-14));  // 2^3 + 2 = 10
    for (double tau : {1e-6, 1e-3, 0.5, 1.0, 7.3, 1e2, 1e5, 1e8}) {
        CAPTURE(tau);
        CHECK(F.f_inv(tau) == Catch::Approx(oracle::cardano_inverse(tau)).epsilon(1e-12));
        CHECK(F.f_inv(-tau) == Catch::Approx(-oracle::cardano_inverse(tau)).epsilon(1e-12));
    }
}

TEST_CASE("f_inv round-trips against f across random parameter tuples") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> ulog(-2.0, 2.0), up(1.1, 8.0), ur(0.2, 0.95);
    for (int k = 0; k < 40; ++k) {
        const double lambda = std::pow(10.0, ulog(rng));
        const double p = up(rng);
        const double r = ur(rng) * p;
        PerturbedPower F(lambda, r, p);
        for (double e = -6.0; e <= 8.0; e += 0.5) {
            const double tau = std::pow(10.0, e);
            CAPTURE(lambda, r, p, tau);
            const double z = F.f_inv(tau);
            CHECK(F.f(z) == Catch::Approx(tau).epsilon(1e-12));
            CHECK(F.f_inv(F.f(tau)) == Catch::Approx(tau).epsilon(1e-12));
        }
    }
}

TEST_CASE("f_inv is odd, monotone, and handles extreme lambda") {
    for (double lambda : {1e-8, 1e-3, 1.0, 1e3, 1e8}) {
        PerturbedPower F(lambda, 0.7, 4.2);
        double prev = -std::numeric_limits<double>::infinity();
        for (double e = -8.0; e <= 8.0; e += 0.25) {
            const double tau = std::pow(10.0, e);
            CAPTURE(lambda, tau);
            CHECK(F.f_inv(-tau) == -F.f_inv(tau));
            const double z = F.f_inv(tau);
            CHECK(z > prev);
            prev = z;
            CHECK(F.f(z) == Catch::Approx(tau).epsilon(1e-11));
        }
    }
    CHECK(PerturbedPower(2.0, 1.0, 3.0).f_inv(0.0) == 0.0);
}

TEST_CASE("Fbar closed form: spot value and equivalence of both arrangements") {
    PerturbedPower F(1.0, 1.0, 3.0);
    // f(1) = 2, so Fbar(2) = 1/2 + 3/4 = 5/4.
    CHECK(F.Fbar(2.0) == Catch::Approx(1.25).epsilon(1e-14));
    CHECK(F.Fbar_alt(2.0) == Catch::Approx(1.25).epsilon(1e-14));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ulog(-2.0, 2.0), up(1.1, 8.0), ur(0.2, 0.95);
    for (int k = 0; k < 30; ++k) {
        const double lambda = std::pow(10.0, ulog(rng));
        const double p = up(rng);
        const double r = ur(rng) * p;
        PerturbedPower G(lambda, r, p);
        for (double e = -5.0; e <= 6.0; e += 0.5) {
            for (double sgn : {1.0, -1.0}) {
                const double tau = sgn * std::pow(10.0, e);
                CAPTURE(lambda, r, p, tau);
                const double a = G.Fbar(tau), b = G.Fbar_alt(tau);
                CHECK(a == Catch::Approx(b).epsilon(1e-12));
                CHECK(G.Fbar(-tau) == a);  // even
            }
        }
    }
}

TEST_CASE("Fbar agrees with direct quadrature of the bisection-oracle inverse") {
    for (auto [lambda, r, p] : {std::array<double, 3>{1.0, 1.0, 3.0},
                                std::array<double, 3>{0.37, 1.4, 5.2},
                                std::array<double, 3>{20.0, 0.6, 2.3}}) {
        PerturbedPower F(lambda, r, p);
        for (double tau : {1e-3, 0.3, 2.0, 17.0, 400.0, 2.5e4}) {
            CAPTURE(lambda, r, p, tau);
            // Substitution x = tau u^3 softens the x^{1/r} behavior at 0 so the
            // oracle converges; tolerance is scaled by m = tau f^{-1}(tau) >= Fbar.
            const double m = tau * oracle::bisect_inverse(lambda, r, p, tau);
            const double quad = oracle::adaptive_simpson(
                [&](double u) {
                    return 3.0 * tau * u * u *
                           oracle::bisect_inverse(lambda, r, p, tau * u * u * u);
                },
                0.0, 1.0, 1e-11 * m);
            CHECK(F.Fbar(tau) == Catch::Approx(quad).epsilon(1e-8));
        }
    }
}

TEST_CASE("crossover threshold satisfies T* = f(lambda^{1/(p-r)})") {
    for (auto [lambda, r, p] : {std::array<double, 3>{1.0, 1.0, 3.0},
                                std::array<double, 3>{5.5, 2.0, 6.0},
                                std::array<double, 3>{1e-4, 0.5, 4.0},
                                std::array<double, 3>{1e4, 1.3, 2.0}}) {
        PerturbedPower F(lambda, r, p);
        CAPTURE(lambda, r, p);
        CHECK(F.crossover() ==
              Catch::Approx(F.f(std::pow(lambda, 1.0 / (p - r)))).epsilon(1e-13));
    }
}

TEST_CASE("asymptotic ratio tends to lambda/p") {
    // Stable form vs naive subtraction at moderate t.
    PerturbedPower F(2.0, 1.0, 3.0);
    {
        const double t = 1e3;
        const double z = F.f_inv(t);
        const double naive =
            (std::pow(t, 4.0 / 3.0) - z * t) / std::pow(t, 2.0 / 3.0);
        CHECK(F.asymptotic_ratio(t) == Catch::Approx(naive).epsilon(1e-9));
    }
    for (auto [lambda, r, p] : {std::array<double, 3>{2.0, 1.0, 3.0},
                                std::array<double, 3>{0.5, 1.5, 4.0},
                                std::array<double, 3>{7.0, 0.8, 2.5}}) {
        PerturbedPower G(lambda, r, p);
        CAPTURE(lambda, r, p);
        CHECK(G.asymptotic_ratio(1e9) == Catch::Approx(lambda / p).epsilon(0.01));
        // Convergence is monotone in the sampled range.
        const double d7 = std::fabs(G.asymptotic_ratio(1e7) - lambda / p);
        const double d9 = std::fabs(G.asymptotic_ratio(1e9) - lambda / p);
        CHECK(d9 < d7);
    }
    CHECK_THROWS_AS(F.asymptotic_ratio(-1.0), DomainError);
}

TEST_CASE("constructor validates the exponent order") {
    CHECK_THROWS_AS(PerturbedPower(1.0, 3.0, 1.0), DomainError);
    CHECK_THROWS_AS(PerturbedPower(0.0, 1.0, 3.0), DomainError);
    CHECK_THROWS_AS(PerturbedPower(1.0, 2.0, 2.0), DomainError);
}
