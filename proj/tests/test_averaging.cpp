#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lienard/averaging.hpp"
#include "lienard/field.hpp"
#include "lienard/hypothesis.hpp"
#include "oracles.hpp"

using namespace lienard;

TEST_CASE("half-circle average of the cubic benchmark has a closed form") {
    const auto fld = van_der_pol();
    for (double r : {0.5, 1.0, 2.0, 3.7}) {
        const double want = (r * r - 4.0) * pi / 8.0;
        REQUIRE(std::abs(fbar(fld, r) - want) < 1e-9);
    }
    REQUIRE(std::abs(fbar(fld, 1.0) + 3.0 * pi / 8.0) < 1e-12);
    REQUIRE_THROWS_AS(fbar(fld, 0.0), std::invalid_argument);
}

TEST_CASE("first-order drift at unit amplitude matches the frozen constant") {
    const auto fld = van_der_pol();
    REQUIRE(std::abs(m1(fld, 1.0, M1Form::polar_f) - 3.0 * pi / 4.0) < 1e-10);
    REQUIRE(std::abs(-2.0 * 1.0 * fbar(fld, 1.0) - 3.0 * pi / 4.0) < 1e-10);
}

TEST_CASE("three drift formulations agree on random amplitudes") {
    const auto fields = {van_der_pol(), LienardField::exp_family(3.0),
                         LienardField::gauss_family(0.5)};
    auto rng = oracle::make_rng(31415);
    std::uniform_real_distribution<double> rs(0.1, 4.0);
    for (const auto& fld : fields) {
        for (int i = 0; i < 16; ++i) {
            const double r = rs(rng);
            const double a = m1(fld, r, M1Form::polar_f);
            const double b = m1(fld, r, M1Form::polar_F);
            const double c = m1(fld, r, M1Form::radical_F);
            REQUIRE(std::abs(a - b) < 1e-7);
            REQUIRE(std::abs(a - c) < 1e-7);
            REQUIRE(std::abs(b - c) < 1e-7);
            // consistency with the half-circle average
            REQUIRE(std::abs(a + 2.0 * r * fbar(fld, r)) < 1e-7);
        }
    }
}

TEST_CASE("half-circle average against a plain quadrature oracle") {
    const auto fld = LienardField::gauss_family(0.5);
    for (double r : {0.7, 1.9}) {
        const double ref = oracle::simpson(
            [&](double s) {
                return std::sqrt(std::max(0.0, 1.0 - s * s)) * fld.f(r * s);
            },
            -1.0, 1.0, 20000);
        REQUIRE(std::abs(fbar(fld, r) - ref) < 1e-5);
    }
}

TEST_CASE("averaged amplitude of the cubic benchmark is 2") {
    const auto fld = van_der_pol();
    const auto rep = analyze_hypotheses(fld);
    const auto prof = find_rho(fld, rep);
    REQUIRE(std::abs(prof.rho - 2.0) < 1e-9);
    REQUIRE(std::abs(prof.bracket_lo - std::sqrt(3.0)) < 1e-9);
    REQUIRE(std::abs(prof.bracket_hi - 4.0) < 1e-9);
    REQUIRE(prof.samples.size() == 512);
    REQUIRE(prof.quadrature_nodes >= 32);
    // scan shows growth below and decay above the averaged amplitude
    REQUIRE(prof.samples.front().second > 0.0);
    REQUIRE(prof.samples.back().second < 0.0);
}

TEST_CASE("averaged amplitude sits inside its bracket for the other families") {
    for (const auto& fld :
         {LienardField::exp_family(3.0), LienardField::gauss_family(0.5)}) {
        const auto rep = analyze_hypotheses(fld);
        const auto prof = find_rho(fld, rep);
        REQUIRE(prof.rho > rep.x_star);
        REQUIRE(prof.rho < rep.r_star);
        REQUIRE(std::abs(fbar(fld, prof.rho)) < 1e-9);
    }
}

TEST_CASE("amplitude search requires verified hypotheses") {
    const auto fld = LienardField::polynomial({1.0, 0.0, 1.0});
    const auto rep = analyze_hypotheses(fld);
    REQUIRE_THROWS_AS(find_rho(fld, rep), std::invalid_argument);
}

TEST_CASE("two-sided arctangent estimate holds strictly above 1") {
    for (double u : {1.000001, 2.0, 10.0, 1e6}) {
        const auto [lower, upper] = arctan_bounds(u);
        REQUIRE(lower);
        REQUIRE(upper);
    }
    REQUIRE_THROWS_AS(arctan_bounds(1.0), std::domain_error);
    REQUIRE_THROWS_AS(arctan_bounds(0.5), std::domain_error);
}
