#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lienard/field.hpp"
#include "oracles.hpp"

using namespace lienard;

TEST_CASE("cubic benchmark field evaluates exactly") {
    const auto fld = van_der_pol();
    REQUIRE(fld.f(2.0) == 3.0);
    REQUIRE(fld.df(2.0) == 4.0);
    REQUIRE(std::abs(fld.F(2.0) - 2.0 / 3.0) < 1e-15);
    REQUIRE(fld.F(0.0) == 0.0);
    REQUIRE(fld.family() == Family::polynomial);
}

TEST_CASE("polynomial antiderivative matches a quadrature oracle") {
    const auto fld = LienardField::polynomial({0.5, -1.0, 0.0, 2.0});
    auto rng = oracle::make_rng(77);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    for (int i = 0; i < 32; ++i) {
        const double x = xs(rng);
        const double want =
            oracle::simpson([&](double t) { return fld.f(t); }, 0.0, x, 4000);
        REQUIRE(std::abs(fld.F(x) - want) < 1e-10);
        REQUIRE(std::abs(fld.df(x) - oracle::fd_derivative(
                                         [&](double t) { return fld.f(t); }, x)) <
                1e-5);
    }
}

TEST_CASE("empty polynomial is rejected") {
    REQUIRE_THROWS_AS(LienardField::polynomial({}), std::invalid_argument);
}

TEST_CASE("rational family with constant denominator reduces to a polynomial") {
    const auto rat = LienardField::rational(-1.0, 1.0, {1.0}, {1.0});
    const auto ref = van_der_pol();
    for (double x : {-2.5, -1.0, -0.3, 0.0, 0.7, 1.0, 3.1}) {
        REQUIRE(std::abs(rat.f(x) - ref.f(x)) < 1e-14);
        REQUIRE(std::abs(rat.F(x) - ref.F(x)) < 1e-13);
        REQUIRE(std::abs(rat.df(x) - ref.df(x)) < 1e-13);
    }
}

TEST_CASE("rational family with a true denominator integrates numerically") {
    // f(x) = (x+2)(x-1)(1+x^2)/(2+x^2)
    const auto fld = LienardField::rational(-2.0, 1.0, {1.0, 0.0, 1.0}, {2.0, 0.0, 1.0});
    REQUIRE(std::abs(fld.f(-2.0)) < 1e-14);
    REQUIRE(std::abs(fld.f(1.0)) < 1e-14);
    REQUIRE(fld.F(0.0) == 0.0);
    const double want =
        oracle::simpson([&](double t) { return fld.f(t); }, 0.0, 2.0, 20000);
    REQUIRE(std::abs(fld.F(2.0) - want) < 1e-9);
    REQUIRE(std::abs(fld.df(0.5) - oracle::fd_derivative(
                                       [&](double t) { return fld.f(t); }, 0.5)) < 1e-5);
}

TEST_CASE("rational family validates its shape") {
    // denominator with a real root inside the check window
    REQUIRE_THROWS_AS(LienardField::rational(-2.0, 1.0, {1.0}, {2.0, 1.0}),
                      std::invalid_argument);
    // p*q negative
    REQUIRE_THROWS_AS(LienardField::rational(-2.0, 1.0, {-1.0}, {1.0}),
                      std::invalid_argument);
    // degree rule: deg q must stay below 2 + deg p
    REQUIRE_THROWS_AS(LienardField::rational(-2.0, 1.0, {1.0}, {1.0, 0.0, 1.0}),
                      std::invalid_argument);
    // zeros must straddle the origin
    REQUIRE_THROWS_AS(LienardField::rational(1.0, 2.0, {1.0}, {1.0}),
                      std::invalid_argument);
}

TEST_CASE("shifted catenary family against frozen zeros") {
    const auto fld = LienardField::exp_family(3.0);
    const double z = 0.9624236501192069;  // log((3 + sqrt(5)) / 2)
    REQUIRE(std::abs(fld.f(z)) < 1e-12);
    REQUIRE(std::abs(fld.f(-z)) < 1e-12);
    REQUIRE(std::abs(z - std::log((3.0 + std::sqrt(5.0)) / 2.0)) < 1e-15);
    REQUIRE(fld.F(0.0) == 0.0);
    const double want =
        oracle::simpson([&](double t) { return fld.f(t); }, 0.0, 1.5, 20000);
    REQUIRE(std::abs(fld.F(1.5) - want) < 1e-9);
    REQUIRE(std::abs(fld.df(0.7) - (std::exp(0.7) - std::exp(-0.7))) < 1e-14);
    REQUIRE_THROWS_AS(LienardField::exp_family(2.0), std::invalid_argument);
}

TEST_CASE("lifted bell family against frozen values") {
    const auto fld = LienardField::gauss_family(0.5);
    REQUIRE(fld.f(0.0) == -0.5);
    REQUIRE(std::abs(fld.F(1.0) - 0.13212055882855767) < 1e-15);
    REQUIRE(fld.F(0.0) == 0.0);
    // F vanishes where the bell weight equals the lift
    const double x2s = 0.8325546111576977;  // sqrt(log 2)
    REQUIRE(std::abs(fld.F(x2s)) < 1e-15);
    const double want =
        oracle::simpson([&](double t) { return fld.f(t); }, 0.0, 2.0, 20000);
    REQUIRE(std::abs(fld.F(2.0) - want) < 1e-9);
    REQUIRE(std::abs(fld.df(0.4) - oracle::fd_derivative(
                                       [&](double t) { return fld.f(t); }, 0.4)) < 1e-5);
    REQUIRE_THROWS_AS(LienardField::gauss_family(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(LienardField::gauss_family(1.0), std::invalid_argument);
}

TEST_CASE("generic field falls back to quadrature and differencing") {
    const auto fld = LienardField::generic([](double x) { return x * x - 1.0; });
    const auto ref = van_der_pol();
    for (double x : {-2.0, -0.5, 0.0, 1.7}) {
        REQUIRE(std::abs(fld.F(x) - ref.F(x)) < 1e-9);
        REQUIRE(std::abs(fld.df(x) - ref.df(x)) < 1e-5);
    }
    REQUIRE(fld.F(0.0) == 0.0);
}

TEST_CASE("generic field honors supplied companions and validates them") {
    const auto fld = LienardField::generic(
        [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
        [](double x) { return 1.0 - std::cos(x); });
    REQUIRE(fld.df(0.3) == std::cos(0.3));
    REQUIRE(fld.F(0.3) == 1.0 - std::cos(0.3));
    REQUIRE_THROWS_AS(
        LienardField::generic([](double x) { return x; }, {},
                              [](double) { return 1.0; }),
        std::invalid_argument);
    REQUIRE_THROWS_AS(LienardField::generic({}), std::invalid_argument);
}
