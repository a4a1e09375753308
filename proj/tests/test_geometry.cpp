#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lienard/field.hpp"
#include "lienard/geometry.hpp"
#include "lienard/hypothesis.hpp"
#include "oracles.hpp"

using namespace lienard;

TEST_CASE("parametrized circle: radius, orientation, closure") {
    const auto c = circle(2.0, 64);
    REQUIRE(c.points.size() == 64);
    REQUIRE(c.valid());
    for (const auto& p : c.points)
        REQUIRE(std::abs(std::hypot(p.x, p.y) - 2.0) < 1e-12);
    REQUIRE(c.points[0].x == 2.0);
    REQUIRE(c.points[1].y < 0.0);  // clockwise, matching the rotation of the flow
}

TEST_CASE("point-to-segment distance clamps to endpoints") {
    REQUIRE(std::abs(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) - 1.0) < 1e-15);
    REQUIRE(std::abs(point_segment_distance({3, 4}, {-1, 0}, {1, 0}) -
                     std::hypot(2.0, 4.0)) < 1e-12);
    // degenerate segment
    REQUIRE(std::abs(point_segment_distance({1, 1}, {0, 0}, {0, 0}) - std::sqrt(2.0)) <
            1e-12);
}

TEST_CASE("set distance between concentric circles equals the gap") {
    const auto a = circle(1.0, 512);
    const auto b = circle(2.0, 512);
    REQUIRE(std::abs(hausdorff(a, b) - 1.0) < 2e-3);
    REQUIRE(hausdorff(a, a) == 0.0);
}

TEST_CASE("set distance between shifted squares is the shift") {
    auto square = [](double ox) {
        ClosedCurve c;
        c.points = {{ox, 0}, {ox + 1, 0}, {ox + 1, 1}, {ox, 1}};
        return c;
    };
    REQUIRE(std::abs(hausdorff(square(0.0), square(0.25)) - 0.25) < 1e-12);
}

TEST_CASE("set distance validates its inputs") {
    ClosedCurve too_small;
    too_small.points = {{0, 0}, {1, 1}};
    REQUIRE_THROWS_AS(hausdorff(too_small, circle(1.0, 16)), std::invalid_argument);
}

TEST_CASE("segment-aware distance agrees with a dense point-cloud oracle") {
    const auto a = circle(2.0, 700);
    ClosedCurve b;
    for (int i = 0; i < 900; ++i) {
        const double t = two_pi * i / 900;
        b.points.push_back({2.5 * std::cos(t) + 0.3, -2.5 * std::sin(t)});
    }
    const double got = hausdorff(a, b);
    std::vector<std::pair<double, double>> pa, pb;
    for (const auto& p : a.points) pa.push_back({p.x, p.y});
    for (const auto& p : b.points) pb.push_back({p.x, p.y});
    const double ref = oracle::hausdorff_points(pa, pb);
    REQUIRE(std::abs(got - ref) < 2e-3);
    // analytic value for circles of radii 2 and 2.5 with centers 0.3 apart
    REQUIRE(std::abs(got - 0.8) < 2e-3);
}

TEST_CASE("singular slow-fast loop of the cubic benchmark hits the frozen corners") {
    const auto fld = van_der_pol();
    const auto rep = analyze_hypotheses(fld);
    const auto g0 = build_gamma0(fld, rep, 64);
    const double h = 2.0 / 3.0;
    auto close = [](Point p, double x, double y) {
        return std::abs(p.x - x) < 1e-9 && std::abs(p.y - y) < 1e-9;
    };
    REQUIRE(close(g0.seg_jump_upper.front(), -1.0, h));
    REQUIRE(close(g0.seg_jump_upper.back(), 2.0, h));
    REQUIRE(close(g0.seg_slide_right.front(), 2.0, h));
    REQUIRE(close(g0.seg_slide_right.back(), 1.0, -h));
    REQUIRE(close(g0.seg_jump_lower.front(), 1.0, -h));
    REQUIRE(close(g0.seg_jump_lower.back(), -2.0, -h));
    REQUIRE(close(g0.seg_slide_left.front(), -2.0, -h));
    REQUIRE(close(g0.seg_slide_left.back(), -1.0, h));
    // slide segments stay on the graph of the primitive
    for (const auto& p : g0.seg_slide_right) REQUIRE(std::abs(p.y - fld.F(p.x)) < 1e-9);
    for (const auto& p : g0.seg_slide_left) REQUIRE(std::abs(p.y - fld.F(p.x)) < 1e-9);
    const auto curve = g0.as_closed_curve();
    REQUIRE(curve.points.size() == 4 * 64);
    REQUIRE(curve.valid());
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i - 1];
        const auto& q = curve.points[i];
        REQUIRE((p.x != q.x || p.y != q.y));
    }
}

TEST_CASE("refining the singular loop is a nested refinement") {
    const auto fld = van_der_pol();
    const auto rep = analyze_hypotheses(fld);
    const auto coarse = build_gamma0(fld, rep, 64).as_closed_curve();
    const auto fine = build_gamma0(fld, rep, 128).as_closed_curve();
    REQUIRE(hausdorff(coarse, fine) < 1e-3);
}

TEST_CASE("chart map and its inverse are mutually inverse") {
    const auto fld = van_der_pol();
    auto rng = oracle::make_rng(99);
    std::uniform_real_distribution<double> xs(-2.5, 2.5);
    for (int i = 0; i < 32; ++i) {
        const Point p{xs(rng), xs(rng)};
        const Point q = map_P_inv(fld, 3.0, map_P(fld, 3.0, p));
        REQUIRE(std::abs(q.x - p.x) < 1e-12);
        REQUIRE(std::abs(q.y - p.y) < 1e-10);
    }
    // definition check at a hand-computed point
    const Point u = map_P(fld, 2.0, {1.0, 4.0});
    REQUIRE(u.x == 1.0);
    REQUIRE(std::abs(u.y - (-2.0 / 3.0 + 2.0)) < 1e-14);
    REQUIRE_THROWS_AS(map_P(fld, 0.0, {1.0, 1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(map_P_inv(fld, -1.0, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("curve mapping applies pointwise") {
    const auto fld = van_der_pol();
    const auto c = circle(1.5, 32);
    const auto mapped = map_curve(c, [&](Point p) { return map_P(fld, 2.0, p); });
    REQUIRE(mapped.points.size() == c.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        REQUIRE(mapped.points[i].x == c.points[i].x);
        REQUIRE(std::abs(mapped.points[i].y -
                         (fld.F(c.points[i].x) + c.points[i].y / 2.0)) < 1e-14);
    }
}
