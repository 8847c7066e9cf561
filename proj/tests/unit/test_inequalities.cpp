#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hamsys/inequalities.hpp"

using namespace hamsys;

namespace {
const InequalityReport& find_report(const std::vector<InequalityReport>& v,
                                    const std::string& name) {
    for (const auto& r : v)
        if (r.lemma == name) return r;
    throw std::runtime_error("missing report: " + name);
}
} // namespace

TEST_CASE("inequality suite passes for reference parameters") {
    PerturbedPower F(1.0, 1.0, 3.0);
    SampleSpec spec;
    spec.n = 4000;
    const auto reps = check_inequalities(F, 1.0, spec);
    REQUIRE(reps.size() == 7);
    for (const auto& r : reps) {
        CAPTURE(r.lemma, r.worst_slack, r.worst_at);
        CHECK(r.pass);
        CHECK(r.n_samples > 0);
    }
    CHECK(find_report(reps, "inv-upper").strict);
    CHECK(find_report(reps, "inv-upper").worst_slack >= 0.0);
    CHECK_FALSE(find_report(reps, "Fbar-m-gap").skipped);
}

TEST_CASE("inequality suite passes across admissible random tuples") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ulog(-1.5, 1.5), up(1.2, 7.0), ufrac(0.25, 0.9);
    SampleSpec spec;
    spec.n = 1500;
    for (int k = 0; k < 12; ++k) {
        const double lambda = std::pow(10.0, ulog(rng));
        const double p = up(rng);
        const double r = ufrac(rng) * p;
        const double s = (1.0 + 0.5 * ufrac(rng)) / r;  // rs in [1, 1.45]
        PerturbedPower F(lambda, r, p);
        for (const auto& rep : check_inequalities(F, s, spec)) {
            CAPTURE(lambda, r, p, s, rep.lemma, rep.worst_slack, rep.worst_at);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("Fbar-m-gap is skipped when ps <= 1") {
    // Inadmissible as a system pair (rs < 1), but the suite runs on raw tuples:
    // this exercises the documented skip path.
    PerturbedPower F(1.0, 2.0, 3.0);
    const auto reps = check_inequalities(F, 0.3, SampleSpec{500, 1e-4, 1e4});
    const auto& gap = find_report(reps, "Fbar-m-gap");
    CHECK(gap.skipped);
    CHECK(gap.pass);
    CHECK_FALSE(gap.note.empty());
}

TEST_CASE("Fbar-lower-s is marked skipped for rs < 1") {
    PerturbedPower F(1.0, 0.5, 3.0);
    const auto reps = check_inequalities(F, 1.0, SampleSpec{500, 1e-4, 1e4});
    CHECK(find_report(reps, "Fbar-lower-s").skipped);
}

TEST_CASE("sample spec is validated") {
    PerturbedPower F(1.0, 1.0, 3.0);
    CHECK_THROWS_AS(check_inequalities(F, 1.0, SampleSpec{4, 1e-6, 1e6}), DomainError);
    CHECK_THROWS_AS(check_inequalities(F, 1.0, SampleSpec{100, 1e6, 1e-6}), DomainError);
}

TEST_CASE("extreme lambda values keep every bound intact") {
    for (double lambda : {1e-8, 1e8}) {
        PerturbedPower F(lambda, 1.0, 5.0);
        for (const auto& rep : check_inequalities(F, 1.2, SampleSpec{2000, 1e-8, 1e8})) {
            CAPTURE(lambda, rep.lemma, rep.worst_slack);
            CHECK(rep.pass);
        }
    }
}
