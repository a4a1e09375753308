#pragma once

// A priori amplitude bounds: a compact convex-like region, symmetric under
// (x, y) -> (-x, -y), that the flow cannot leave. Its upper boundary is
// y = gamma(x) on [-x0, x0] and the lower boundary is the reflected curve
// y = -gamma(-x). gamma comes in two closed forms glued continuously at
// lambda = -1/(2 min f); the region diameter is reported in closed form as
// well. Everything here only needs min f < 0 on [-x0, x0].

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lienard/dynamics.hpp"
#include "lienard/field.hpp"
#include "lienard/geometry.hpp"
#include "lienard/roots.hpp"

namespace lienard {

struct MinFResult {
    double value = 0;
    double argmin = 0;
};

// Global minimum of f on [lo, hi]: grid scan, then golden-section refinement
// around every interior local minimum of the grid.
inline MinFResult min_f(const LienardField& field, double lo, double hi,
                        int grid_n = 2048) {
    if (!(hi > lo)) throw std::invalid_argument("min_f: empty interval");
    if (grid_n < 8) grid_n = 8;
    std::vector<double> xs(grid_n + 1), fs(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        xs[i] = lo + (hi - lo) * i / grid_n;
        fs[i] = field.f(xs[i]);
    }
    MinFResult best{fs[0], xs[0]};
    for (int i = 0; i <= grid_n; ++i)
        if (fs[i] < best.value) best = {fs[i], xs[i]};
    auto f = [&](double x) { return field.f(x); };
    for (int i = 1; i < grid_n; ++i) {
        if (fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1]) {
            const double xm = golden_section_min(f, xs[i - 1], xs[i + 1]);
            const double fm = field.f(xm);
            if (fm < best.value) best = {fm, xm};
        }
    }
    return best;
}

// The switch between the two closed forms of gamma.
inline double lambda_branch_point(double m) {
    if (!(m < 0.0))
        throw std::invalid_argument("lambda_branch_point: requires min f < 0");
    return -1.0 / (2.0 * m);
}

inline double gamma_bound(double x, double lambda, double x0, double m) {
    if (!(x0 > 0.0)) throw std::invalid_argument("gamma_bound: x0 must be positive");
    if (!(m < 0.0)) throw std::invalid_argument("gamma_bound: requires min f < 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("gamma_bound: lambda must be nonnegative");
    if (!(std::abs(x) <= x0))
        throw std::domain_error("gamma_bound: abscissa outside [-x0, x0]");
    double rad;
    if (lambda <= lambda_branch_point(m)) {
        const double d = 1.0 + m * lambda;
        rad = (x + x0) * (x0 - x - m * lambda * (x + x0)) / d;
    } else {
        rad = (x + x0) * (x0 - x + 8.0 * m * m * lambda * lambda * x0);
    }
    return std::sqrt(std::max(rad, 0.0));
}

// d gamma / dx, analytic; unbounded at the corners where gamma vanishes.
inline double gamma_bound_dx(double x, double lambda, double x0, double m) {
    const double g = gamma_bound(x, lambda, x0, m);
    if (g == 0.0)
        throw std::domain_error("gamma_bound_dx: derivative unbounded where gamma = 0");
    double drad;
    if (lambda <= lambda_branch_point(m)) {
        drad = (-2.0 * x - 2.0 * m * lambda * (x + x0)) / (1.0 + m * lambda);
    } else {
        drad = 8.0 * m * m * lambda * lambda * x0 - 2.0 * x;
    }
    return drad / (2.0 * g);
}

inline double region_diameter(double lambda, double x0, double m) {
    if (!(x0 > 0.0)) throw std::invalid_argument("region_diameter: x0 must be positive");
    if (!(m < 0.0)) throw std::invalid_argument("region_diameter: requires min f < 0");
    const double ml = m * lambda;
    if (lambda <= lambda_branch_point(m))
        return 2.0 * x0 * std::sqrt(1.0 + ml * ml) / (1.0 + ml);
    return 2.0 * x0 * std::sqrt(1.0 + 16.0 * ml * ml);
}

struct RegionBoundary {
    std::vector<Point> upper;  // y = gamma(x), x from -x0 to x0
    std::vector<Point> lower;  // y = -gamma(-x), x from -x0 to x0
};

inline RegionBoundary region_boundary(double lambda, double x0, double m, int n = 512) {
    if (n < 2) n = 2;
    RegionBoundary rb;
    rb.upper.reserve(n + 1);
    rb.lower.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = -x0 + 2.0 * x0 * i / n;
        const double xc = std::clamp(x, -x0, x0);
        rb.upper.push_back({xc, gamma_bound(xc, lambda, x0, m)});
        rb.lower.push_back({xc, -gamma_bound(-xc, lambda, x0, m)});
    }
    return rb;
}

struct InwardFlowResult {
    bool ok = false;
    double max_upper = 0;  // largest outward component seen on the upper curve
    double max_lower = 0;
    double worst_x = 0;
};

// Samples the outward component of the vector field along both boundary
// curves at interior abscissas. Nonpositive (up to slack) everywhere means
// the region traps the flow.
inline InwardFlowResult inward_flow_check(const LienardField& field, double lambda,
                                          double x0, double m, int n = 2048,
                                          double slack = 1e-9) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("inward_flow_check: lambda must be nonnegative");
    InwardFlowResult res;
    res.max_upper = -std::numeric_limits<double>::infinity();
    res.max_lower = -std::numeric_limits<double>::infinity();
    res.worst_x = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = -x0 + 2.0 * x0 * (i + 1) / (n + 1);
        const double g = gamma_bound(x, lambda, x0, m);
        const double dg = gamma_bound_dx(x, lambda, x0, m);
        const double up = -dg * g - x - lambda * field.f(x) * g;
        const double low = -dg * g - x - lambda * field.f(-x) * g;
        if (up > res.max_upper) res.max_upper = up;
        if (low > res.max_lower) res.max_lower = low;
        if (std::max(up, low) > worst) {
            worst = std::max(up, low);
            res.worst_x = x;
        }
    }
    res.ok = res.max_upper <= slack && res.max_lower <= slack;
    return res;
}

struct ContainmentResult {
    bool ok = true;
    Point violation;    // first offending point when !ok
    double margin = 0;  // smallest distance-like slack to the boundary
};

// Checks every vertex of the curve against the region inequalities.
inline ContainmentResult region_contains(const ClosedCurve& curve, double lambda,
                                         double x0, double m,
                                         double strictness = 1e-9) {
    ContainmentResult res;
    res.margin = std::numeric_limits<double>::infinity();
    for (const auto& p : curve.points) {
        const double side = x0 - std::abs(p.x);
        double mgn = side;
        bool inside = side >= -strictness;
        if (inside) {
            const double xc = std::clamp(p.x, -x0, x0);
            const double top = gamma_bound(xc, lambda, x0, m) - p.y;
            const double bot = p.y + gamma_bound(-xc, lambda, x0, m);
            mgn = std::min({side, top, bot});
            inside = top >= -strictness && bot >= -strictness;
        }
        res.margin = std::min(res.margin, mgn);
        if (!inside && res.ok) {
            res.ok = false;
            res.violation = p;
        }
    }
    return res;
}

struct BoundRegion {
    double lambda = 0;
    double x0 = 0;
    double m = 0;       // min of f over [-x0, x0]
    double m_argmin = 0;
    int branch = 1;
    double branch_lambda = 0;  // where the two closed forms meet
    double diameter = 0;
    RegionBoundary boundary;
};

inline BoundRegion make_region(const LienardField& field, double lambda, double x0,
                               int boundary_n = 512,
                               std::optional<double> m_override = {}) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("make_region: lambda must be nonnegative");
    if (!(x0 > 0.0)) throw std::invalid_argument("make_region: x0 must be positive");
    BoundRegion region;
    region.lambda = lambda;
    region.x0 = x0;
    if (m_override) {
        region.m = *m_override;
        region.m_argmin = std::numeric_limits<double>::quiet_NaN();
    } else {
        const MinFResult mf = min_f(field, -x0, x0);
        region.m = mf.value;
        region.m_argmin = mf.argmin;
    }
    if (!(region.m < 0.0))
        throw std::runtime_error("make_region: f is nonnegative on [-x0, x0]");
    region.branch_lambda = lambda_branch_point(region.m);
    region.branch = lambda <= region.branch_lambda ? 1 : 2;
    region.diameter = region_diameter(lambda, x0, region.m);
    region.boundary = region_boundary(lambda, x0, region.m, boundary_n);
    return region;
}

// Radius sufficient to cover the observed and predicted amplitudes with a
// safety factor. Uses the landing abscissas, the averaged amplitude when
// available, and computed cycles over the given grid.
inline double choose_x0(const LienardField& field, const HypothesisReport& report,
                        std::optional<double> rho,
                        const std::vector<double>& lambda_grid, double safety = 1.2,
                        const CycleOptions& base = {}) {
    double amp = 0.0;
    if (report.a2_holds) amp = std::max({amp, -report.x1, report.x2});
    if (rho) amp = std::max(amp, *rho);
    if (!lambda_grid.empty()) {
        CycleOptions c = base;
        if (rho && !c.rho) c.rho = rho;
        if (report.a2_holds && !c.x2) c.x2 = report.x2;
        const auto rows = amplitude_sweep(field, lambda_grid, c);
        for (const auto& row : rows)
            if (row.ok)
                amp = std::max({amp, -row.cycle.xi_minus, row.cycle.xi_plus});
    }
    if (!(amp > 0.0))
        throw std::runtime_error("choose_x0: no amplitude information available");
    return safety * amp;
}

}  // namespace lienard
