#pragma once

// Plane-curve utilities: the singular slow-fast cycle Gamma0, the chart map
// between the phase plane and the slow-fast plane, reference circles, and the
// Hausdorff distance between closed polylines.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lienard/field.hpp"
#include "lienard/hypothesis.hpp"
#include "lienard/quadrature.hpp"

namespace lienard {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Implicitly closed polyline: the last point connects back to the first.
struct ClosedCurve {
    std::vector<Point> points;

    bool valid() const {
        if (points.size() < 3) return false;
        for (const auto& p : points)
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
        return true;
    }
};

// The four-piece singular cycle: horizontal fast jumps at the fold levels
// joined by the slow arcs along the graph of F. Traversal follows the flow:
// jump right at the upper level, slide down the right branch, jump left at
// the lower level, slide up the left branch.
struct SingularTrajectory {
    std::vector<Point> seg_jump_upper;  // (x_M, F(x_M)) -> (x2, F(x_M))
    std::vector<Point> seg_slide_right; // (x2, F(x_M)) -> (x_m, F(x_m)) on graph of F
    std::vector<Point> seg_jump_lower;  // (x_m, F(x_m)) -> (x1, F(x_m))
    std::vector<Point> seg_slide_left;  // (x1, F(x_m)) -> (x_M, F(x_M)) on graph of F

    ClosedCurve as_closed_curve() const {
        ClosedCurve c;
        auto append = [&](const std::vector<Point>& seg) {
            for (std::size_t i = 0; i + 1 < seg.size(); ++i) c.points.push_back(seg[i]);
        };
        append(seg_jump_upper);
        append(seg_slide_right);
        append(seg_jump_lower);
        append(seg_slide_left);
        return c;
    }
};

// n_per_segment counts intervals; each segment carries n+1 points including
// both endpoints, so doubling n keeps every existing abscissa.
inline SingularTrajectory build_gamma0(const LienardField& field,
                                       const HypothesisReport& report,
                                       int n_per_segment = 256) {
    if (!report.a1_holds || !report.a2_holds)
        throw std::invalid_argument("build_gamma0: requires verified A1 and A2");
    if (n_per_segment < 1)
        throw std::invalid_argument("build_gamma0: need at least one interval per segment");
    const double upper = report.F_at_xM;
    const double lower = report.F_at_xm;
    const int n = n_per_segment;
    SingularTrajectory g;
    auto line = [&](std::vector<Point>& seg, double xa, double xb, double y) {
        seg.reserve(n + 1);
        for (int i = 0; i <= n; ++i) seg.push_back({xa + (xb - xa) * i / n, y});
    };
    auto graph = [&](std::vector<Point>& seg, double xa, double xb) {
        seg.reserve(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double x = xa + (xb - xa) * i / n;
            seg.push_back({x, field.F(x)});
        }
    };
    line(g.seg_jump_upper, report.x_M, report.x2, upper);
    graph(g.seg_slide_right, report.x2, report.x_m);
    line(g.seg_jump_lower, report.x_m, report.x1, lower);
    graph(g.seg_slide_left, report.x1, report.x_M);
    // Corner exactness: the slide endpoints sit at the jump levels by
    // definition of x1, x2, x_M, x_m; pin them to remove root-finder residue.
    g.seg_slide_right.front().y = upper;
    g.seg_slide_right.back().y = lower;
    g.seg_slide_left.front().y = lower;
    g.seg_slide_left.back().y = upper;
    return g;
}

// Chart map (x, y) -> (x, F(x) + y/l) taking the phase plane to the
// slow-fast plane, and its inverse. Defined for l > 0.
inline Point map_P(const LienardField& field, double lambda, Point p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("map_P: lambda must be positive");
    return {p.x, field.F(p.x) + p.y / lambda};
}

inline Point map_P_inv(const LienardField& field, double lambda, Point p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("map_P_inv: lambda must be positive");
    return {p.x, lambda * (p.y - field.F(p.x))};
}

template <class Map>
ClosedCurve map_curve(const ClosedCurve& c, Map&& fn) {
    ClosedCurve out;
    out.points.reserve(c.points.size());
    for (const auto& p : c.points) out.points.push_back(fn(p));
    return out;
}

// Circle of radius rho sampled clockwise, matching the polar chart
// x = r cos(t), y = -r sin(t): point i sits at angle 2 pi i / n.
inline ClosedCurve circle(double rho, int n) {
    if (!(rho > 0.0)) throw std::invalid_argument("circle: radius must be positive");
    if (n < 3) throw std::invalid_argument("circle: need at least 3 points");
    ClosedCurve c;
    c.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double th = two_pi * i / n;
        c.points.push_back({rho * std::cos(th), -rho * std::sin(th)});
    }
    return c;
}

inline double point_segment_distance(Point p, Point a, Point b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

inline double point_curve_distance(Point p, const ClosedCurve& c) {
    double best = std::numeric_limits<double>::infinity();
    const auto& pts = c.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % pts.size()];
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return best;
}

inline double directed_hausdorff(const ClosedCurve& from, const ClosedCurve& to) {
    double worst = 0.0;
    for (const auto& p : from.points) worst = std::max(worst, point_curve_distance(p, to));
    return worst;
}

// Symmetric Hausdorff distance between closed polylines, evaluated point to
// segment so sparse sampling of one curve against the other stays tight.
inline double hausdorff(const ClosedCurve& a, const ClosedCurve& b) {
    if (!a.valid() || !b.valid())
        throw std::invalid_argument("hausdorff: curves need >= 3 finite points");
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace lienard
