#pragma once

// Phase-plane dynamics of x' = y, y' = -x - l f(x) y, its slow-fast chart
// mu x' = u - F(x), u' = -x with mu = 1/l^2 (time rescaled by 1/l), and the
// return map on the half-axis {y = 0, x > 0}.
//
// Integration is an embedded Dormand-Prince 5(4) pair with PI step control.
// Each accepted step carries a cubic Hermite dense output used for event
// location; the section crossing is refined in time to 1e-12 and the crossing
// state is recomputed with a single exact step, so the return abscissa is
// accurate to the integration tolerance rather than the interpolant error.
// Above a configurable lambda the integration runs in the slow-fast chart,
// which keeps step counts bounded by the fold geometry instead of the damping
// strength; times are reported in phase-plane units either way.

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lienard/field.hpp"
#include "lienard/geometry.hpp"
#include "lienard/hypothesis.hpp"

namespace lienard {

inline Point vector_field(const LienardField& field, double lambda, Point s) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("vector_field: lambda must be nonnegative");
    return {s.y, -s.x - lambda * field.f(s.x) * s.y};
}

// div X depends on x alone; it is positive strictly between the zeros of f.
inline double divergence(const LienardField& field, double lambda, Point s) {
    return -lambda * field.f(s.x);
}

// Slow-fast vector field in (x, u); state.y holds u.
inline Point slow_fast_field(const LienardField& field, double mu, Point s) {
    if (!(mu > 0.0)) throw std::invalid_argument("slow_fast_field: mu must be positive");
    return {(s.y - field.F(s.x)) / mu, -s.x};
}

enum class Chart { lienard_plane, slow_fast_plane };
enum class ChartChoice { auto_select, lienard_plane, slow_fast_plane };

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-14;
    double h_max = 1.0;
    long max_steps = 2000000;
    double bound = 1e6;  // escape box for |x|, |y|
    ChartChoice chart = ChartChoice::auto_select;
    double stiff_lambda_threshold = 5.0;
    double max_dt_output = std::numeric_limits<double>::infinity();
};

struct Trajectory {
    std::vector<double> times;   // phase-plane time
    std::vector<Point> states;   // coordinates of `chart`
    Chart chart = Chart::lienard_plane;
};

namespace detail {

// One accepted step with endpoint derivatives; eval interpolates with the
// cubic Hermite polynomial matching y and y' at both ends.
struct DenseStep {
    double t0 = 0, t1 = 0;
    Point y0, y1, f0, f1;

    Point eval(double t) const {
        const double h = t1 - t0;
        const double th = (t - t0) / h;
        const double u = 1.0 - th;
        const double h00 = (1.0 + 2.0 * th) * u * u;
        const double h10 = th * u * u;
        const double h01 = th * th * (3.0 - 2.0 * th);
        const double h11 = th * th * (th - 1.0);
        return {h00 * y0.x + h * (h10 * f0.x + h11 * f1.x) + h01 * y1.x,
                h00 * y0.y + h * (h10 * f0.y + h11 * f1.y) + h01 * y1.y};
    }
};

struct StageResult {
    Point y5;      // fifth-order solution at t + h
    Point k7;      // derivative at (t + h, y5); first stage of the next step
    Point err;     // embedded error estimate (already scaled by h)
};

template <class RHS>
StageResult dopri5_stages(RHS& rhs, double t, const Point& y, const Point& k1, double h) {
    const Point k2 = rhs(t + h * 0.2, {y.x + h * 0.2 * k1.x, y.y + h * 0.2 * k1.y});
    const Point k3 = rhs(t + h * 0.3, {y.x + h * (0.075 * k1.x + 0.225 * k2.x),
                                       y.y + h * (0.075 * k1.y + 0.225 * k2.y)});
    const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    const Point k4 = rhs(t + h * 0.8, {y.x + h * (a41 * k1.x + a42 * k2.x + a43 * k3.x),
                                       y.y + h * (a41 * k1.y + a42 * k2.y + a43 * k3.y)});
    const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    const Point k5 = rhs(t + h * (8.0 / 9.0),
                         {y.x + h * (a51 * k1.x + a52 * k2.x + a53 * k3.x + a54 * k4.x),
                          y.y + h * (a51 * k1.y + a52 * k2.y + a53 * k3.y + a54 * k4.y)});
    const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    const Point k6 = rhs(t + h, {y.x + h * (a61 * k1.x + a62 * k2.x + a63 * k3.x +
                                            a64 * k4.x + a65 * k5.x),
                                 y.y + h * (a61 * k1.y + a62 * k2.y + a63 * k3.y +
                                            a64 * k4.y + a65 * k5.y)});
    const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    const Point y5{y.x + h * (b1 * k1.x + b3 * k3.x + b4 * k4.x + b5 * k5.x + b6 * k6.x),
                   y.y + h * (b1 * k1.y + b3 * k3.y + b4 * k4.y + b5 * k5.y + b6 * k6.y)};
    const Point k7 = rhs(t + h, y5);
    const double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    const Point err{h * (e1 * k1.x + e3 * k3.x + e4 * k4.x + e5 * k5.x + e6 * k6.x +
                         e7 * k7.x),
                    h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y +
                         e7 * k7.y)};
    StageResult sr;
    sr.y5 = y5;
    sr.k7 = k7;
    sr.err = err;
    return sr;
}

// Driver: calls sink(DenseStep) after every accepted step; sink returns false
// to stop. Throws on step underflow, step budget exhaustion, non-finite
// states, and escape from the bounding box.
template <class RHS, class Sink>
void adaptive_integrate(RHS&& rhs, double t0, Point y0, double t_end,
                        const IntegrateOptions& opts, Sink&& sink) {
    double t = t0;
    Point y = y0;
    Point k1 = rhs(t, y);
    double h = std::clamp(opts.h_init, opts.h_min, opts.h_max);
    double err_prev = 1e-4;
    long steps = 0;
    while (t < t_end) {
        if (++steps > opts.max_steps)
            throw std::runtime_error("integrate: step budget exhausted");
        h = std::min(h, t_end - t);
        if (t + h == t) throw std::runtime_error("integrate: step size underflow");
        const StageResult sr = dopri5_stages(rhs, t, y, k1, h);
        const double sx = opts.abs_tol +
                          opts.rel_tol * std::max(std::abs(y.x), std::abs(sr.y5.x));
        const double sy = opts.abs_tol +
                          opts.rel_tol * std::max(std::abs(y.y), std::abs(sr.y5.y));
        const double ex = sr.err.x / sx;
        const double ey = sr.err.y / sy;
        const double err = std::sqrt(0.5 * (ex * ex + ey * ey));
        if (err <= 1.0) {
            DenseStep ds{t, t + h, y, sr.y5, k1, sr.k7};
            t += h;
            y = sr.y5;
            k1 = sr.k7;
            if (!std::isfinite(y.x) || !std::isfinite(y.y))
                throw std::runtime_error("integrate: state became non-finite");
            if (std::abs(y.x) > opts.bound || std::abs(y.y) > opts.bound)
                throw std::runtime_error("integrate: trajectory escaped the bounding box");
            double scale = 0.9 * std::pow(std::max(err, 1e-30), -0.17) *
                           std::pow(err_prev, 0.04);
            scale = std::clamp(scale, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
            h = std::min(h * scale, opts.h_max);
            if (!sink(ds)) return;
        } else {
            double shrink =
                std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
            h *= shrink;
            if (h < opts.h_min)
                throw std::runtime_error("integrate: step size underflow");
        }
    }
}

struct CrossingEvent {
    double t = 0;
    Point state;
};

// Recomputes the state at t_star with one exact partial step from the start
// of the dense step, avoiding the Hermite interpolation error.
template <class RHS>
Point polish_state(RHS& rhs, const DenseStep& ds, double t_star) {
    const double h = t_star - ds.t0;
    if (h <= 0.0) return ds.y0;
    return dopri5_stages(rhs, ds.t0, ds.y0, ds.f0, h).y5;
}

// Integrates until g(state) crosses from positive to nonpositive at a state
// satisfying pred, refining the crossing time to time_tol by bisection on the
// dense output. on_step(ds, t_stop, final_state_or_null) fires for every
// accepted step (t_stop < ds.t1 on the crossing step).
template <class RHS, class G, class Pred, class OnStep>
std::optional<CrossingEvent> integrate_until_downcross(RHS&& rhs, double t0, Point y0,
                                                       double t_max,
                                                       const IntegrateOptions& opts,
                                                       G&& g, Pred&& pred,
                                                       OnStep&& on_step,
                                                       double time_tol = 1e-12) {
    std::optional<CrossingEvent> hit;
    double g_prev = g(y0);
    adaptive_integrate(
        rhs, t0, y0, t_max, opts,
        [&](const DenseStep& ds) -> bool {
            const double g_now = g(ds.y1);
            if (g_prev > 0.0 && g_now <= 0.0) {
                double lo = ds.t0, hi = ds.t1;
                for (int it = 0; it < 200 && hi - lo > time_tol; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (g(ds.eval(mid)) > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                const double t_star = 0.5 * (lo + hi);
                const Point y_star = polish_state(rhs, ds, t_star);
                if (pred(y_star)) {
                    hit = CrossingEvent{t_star, y_star};
                    on_step(ds, t_star, &y_star);
                    return false;
                }
            }
            g_prev = g_now;
            on_step(ds, ds.t1, static_cast<const Point*>(nullptr));
            return true;
        });
    return hit;
}

struct ReturnData {
    double r_return = 0;
    double time = 0;  // phase-plane time of the crossing
    std::vector<double> times;
    std::vector<Point> states;  // phase-plane coordinates when collected
};

// One full revolution from (r, 0) back to the section {y = 0, x > 0, y
// decreasing}. In chart mode the section is the fold-free crossing of the
// critical manifold u = F(x) with x > 0.
inline ReturnData section_return(const LienardField& field, double lambda, double r,
                                 const IntegrateOptions& opts, double max_time,
                                 bool collect) {
    if (!(r > 0.0))
        throw std::invalid_argument("section_return: section abscissa must be positive");
    if (max_time <= 0.0) max_time = 100.0 + 20.0 * lambda;
    const bool chart_mode =
        opts.chart == ChartChoice::slow_fast_plane ||
        (opts.chart == ChartChoice::auto_select && lambda >= opts.stiff_lambda_threshold &&
         lambda > 0.0);
    const double time_scale = chart_mode ? lambda : 1.0;  // t = scale * internal
    ReturnData out;
    const double dt_int = opts.max_dt_output / time_scale;
    double next_t = dt_int;
    auto push = [&](double ti, Point s) {
        out.times.push_back(time_scale * ti);
        out.states.push_back(s);
    };
    auto sink = [&](const DenseStep& ds, double t_stop, const Point* y_stop) {
        if (!collect) return;
        if (std::isfinite(dt_int) && dt_int > 0.0)
            for (; next_t < t_stop; next_t += dt_int)
                if (next_t > ds.t0) push(next_t, ds.eval(next_t));
        push(t_stop, y_stop ? *y_stop : ds.y1);
    };
    auto pred = [](Point s) { return s.x > 0.0; };
    std::optional<CrossingEvent> hit;
    if (!chart_mode) {
        if (!(lambda >= 0.0))
            throw std::invalid_argument("section_return: lambda must be nonnegative");
        auto rhs = [&](double, Point s) { return vector_field(field, lambda, s); };
        Point y0{r, 0.0};
        if (collect) push(0.0, y0);
        hit = integrate_until_downcross(rhs, 0.0, y0, max_time, opts,
                                        [](Point s) { return s.y; }, pred, sink);
    } else {
        const double mu = 1.0 / (lambda * lambda);
        auto rhs = [&](double, Point s) { return slow_fast_field(field, mu, s); };
        Point y0{r, field.F(r)};
        if (collect) push(0.0, y0);
        hit = integrate_until_downcross(rhs, 0.0, y0, max_time / lambda, opts,
                                        [&](Point s) { return s.y - field.F(s.x); }, pred,
                                        sink);
    }
    if (!hit)
        throw std::runtime_error("section_return: no section return within the time budget");
    out.r_return = hit->state.x;
    out.time = time_scale * hit->t;
    if (collect && chart_mode)
        for (auto& p : out.states) p = map_P_inv(field, lambda, p);
    return out;
}

}  // namespace detail

// Integrates for a fixed time span, recording accepted steps (plus dense
// subsamples when max_dt_output is finite). Chart selection as documented.
inline Trajectory integrate(const LienardField& field, double lambda, Point state0,
                            double t_end, const IntegrateOptions& opts = {}) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("integrate: lambda must be nonnegative");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    const bool chart_mode =
        opts.chart == ChartChoice::slow_fast_plane ||
        (opts.chart == ChartChoice::auto_select && lambda >= opts.stiff_lambda_threshold &&
         lambda > 0.0);
    if (chart_mode && !(lambda > 0.0))
        throw std::invalid_argument("integrate: slow-fast chart requires lambda > 0");
    Trajectory traj;
    traj.chart = chart_mode ? Chart::slow_fast_plane : Chart::lienard_plane;
    const double time_scale = chart_mode ? lambda : 1.0;
    const double dt_int = opts.max_dt_output / time_scale;
    double next_t = dt_int;
    auto push = [&](double ti, Point s) {
        traj.times.push_back(time_scale * ti);
        traj.states.push_back(s);
    };
    auto sink = [&](const detail::DenseStep& ds) {
        if (std::isfinite(dt_int) && dt_int > 0.0)
            for (; next_t < ds.t1; next_t += dt_int)
                if (next_t > ds.t0) push(next_t, ds.eval(next_t));
        push(ds.t1, ds.y1);
        return true;
    };
    if (!chart_mode) {
        auto rhs = [&](double, Point s) { return vector_field(field, lambda, s); };
        push(0.0, state0);
        detail::adaptive_integrate(rhs, 0.0, state0, t_end, opts, sink);
    } else {
        const double mu = 1.0 / (lambda * lambda);
        auto rhs = [&](double, Point s) { return slow_fast_field(field, mu, s); };
        Point u0 = map_P(field, lambda, state0);
        push(0.0, u0);
        detail::adaptive_integrate(rhs, 0.0, u0, t_end / lambda, opts, sink);
    }
    return traj;
}

struct PoincareResult {
    double r_return = 0;
    double return_time = 0;
};

// First-return map on {y = 0, x > 0} with y decreasing through the section.
inline PoincareResult poincare_return(const LienardField& field, double lambda, double r,
                                      const IntegrateOptions& opts = {},
                                      double max_time = 0.0) {
    const auto rd = detail::section_return(field, lambda, r, opts, max_time, false);
    return {rd.r_return, rd.time};
}

struct CycleOptions {
    IntegrateOptions integrate;
    std::optional<double> seed_r;  // explicit section seed
    std::optional<double> rho;     // averaged amplitude, seeds the smooth regime
    std::optional<double> x2;      // landing abscissa, seeds the relaxation regime
    double delta_tol = 1e-9;       // |Pi(r) - r| at convergence
    double step_tol = 1e-10;       // |r_{k+1} - r_k| at convergence
    int max_secant_iters = 60;
    double stability_probe = 1e-2;
    int min_samples = 1024;
    double max_return_time = 0.0;  // 0 = auto
};

struct LimitCycle {
    double lambda = 0;
    ClosedCurve points;  // one loop in the phase plane
    double period = 0;
    double xi_minus = 0;
    double xi_plus = 0;
    bool stable = false;
    double section_radius = 0;
};

// Fixed point of the return map by damped secant iteration on the
// displacement Delta(r) = Pi(r) - r; stability certified by the sign of Delta
// on both sides. Seeds: explicit > regime-appropriate landmark > warm-up
// returns from r = 1.
inline LimitCycle find_limit_cycle(const LienardField& field, double lambda,
                                   const CycleOptions& copts = {}) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("find_limit_cycle: lambda must be positive");
    const bool chart_mode =
        copts.integrate.chart == ChartChoice::slow_fast_plane ||
        (copts.integrate.chart == ChartChoice::auto_select &&
         lambda >= copts.integrate.stiff_lambda_threshold);

    double last_time = 0.0;
    auto Pi = [&](double r) {
        const auto rd = detail::section_return(field, lambda, r, copts.integrate,
                                               copts.max_return_time, false);
        last_time = rd.time;
        return rd.r_return;
    };
    auto Delta = [&](double r) { return Pi(r) - r; };

    double seed;
    if (copts.seed_r) {
        seed = *copts.seed_r;
    } else if (chart_mode && copts.x2) {
        seed = *copts.x2;
    } else if (!chart_mode && copts.rho) {
        seed = *copts.rho;
    } else if (copts.rho || copts.x2) {
        seed = copts.rho ? *copts.rho : *copts.x2;
    } else {
        double r = 1.0;
        for (int i = 0; i < 64; ++i) {
            const double rn = Pi(r);
            const bool settled = std::abs(rn - r) < 1e-3;
            r = rn;
            if (settled) break;
        }
        seed = r;
    }
    if (!(seed > 0.0))
        throw std::invalid_argument("find_limit_cycle: seed must be positive");

    double r1 = seed;
    double r2 = seed * 1.01;
    double d1 = Delta(r1);
    double d2 = Delta(r2);
    double r_fix = r2;
    bool converged = false;
    for (int it = 0; it < copts.max_secant_iters && !converged; ++it) {
        if (std::abs(d2) < copts.delta_tol) {
            converged = true;
            r_fix = r2;
            break;
        }
        const double denom = d2 - d1;
        if (denom == 0.0 || !std::isfinite(denom)) break;
        double r_next = r2 - d2 * (r2 - r1) / denom;
        if (!std::isfinite(r_next) || r_next <= 0.0) break;
        double d_next = Delta(r_next);
        for (int damp = 0; std::abs(d_next) > std::abs(d2) && damp < 8; ++damp) {
            r_next = r2 + 0.8 * (r_next - r2);
            d_next = Delta(r_next);
        }
        r1 = r2;
        d1 = d2;
        r2 = r_next;
        d2 = d_next;
        if (std::abs(d2) < copts.delta_tol || std::abs(r2 - r1) < copts.step_tol) {
            converged = true;
            r_fix = r2;
        }
    }
    if (!converged)
        throw std::runtime_error("find_limit_cycle: secant iteration did not converge");

    const double probe = copts.stability_probe * std::max(1.0, r_fix);
    const double d_up = Delta(r_fix + probe);
    const double d_dn = Delta(std::max(r_fix - probe, 0.25 * r_fix));

    const double t_est = last_time > 0.0 ? last_time : two_pi;
    IntegrateOptions io = copts.integrate;
    io.max_dt_output = t_est / std::max(copts.min_samples, 16);
    const auto final_pass =
        detail::section_return(field, lambda, r_fix, io, copts.max_return_time, true);

    LimitCycle cyc;
    cyc.lambda = lambda;
    cyc.period = final_pass.time;
    cyc.section_radius = r_fix;
    cyc.stable = d_up < 0.0 && d_dn > 0.0;
    cyc.points.points = final_pass.states;
    if (cyc.points.points.size() > 1) {
        const Point& a = cyc.points.points.front();
        const Point& b = cyc.points.points.back();
        if (std::hypot(a.x - b.x, a.y - b.y) < 1e-6 * std::max(1.0, r_fix))
            cyc.points.points.pop_back();
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : cyc.points.points) {
        lo = std::min(lo, p.x);
        hi = std::max(hi, p.x);
    }
    cyc.xi_minus = lo;
    cyc.xi_plus = std::max(hi, r_fix);
    return cyc;
}

struct SweepRow {
    double lambda = 0;
    bool ok = false;
    std::string error;
    LimitCycle cycle;
};

// One cycle per lambda; failures are recorded per row and do not abort the
// sweep. Rows run concurrently (the field is shared read-only) and land in
// input order.
inline std::vector<SweepRow> amplitude_sweep(const LienardField& field,
                                             const std::vector<double>& lambdas,
                                             const CycleOptions& base = {},
                                             bool parallel = true) {
    std::vector<SweepRow> rows(lambdas.size());
    auto run_one = [&](std::size_t i) {
        SweepRow row;
        row.lambda = lambdas[i];
        try {
            row.cycle = find_limit_cycle(field, lambdas[i], base);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows[i] = std::move(row);
    };
    if (parallel && lambdas.size() > 1) {
        std::vector<std::future<void>> futs;
        futs.reserve(lambdas.size());
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            futs.push_back(std::async(std::launch::async, run_one, i));
        for (auto& f : futs) f.get();
    } else {
        for (std::size_t i = 0; i < lambdas.size(); ++i) run_one(i);
    }
    return rows;
}

// A periodic orbit must leave the strip where the divergence keeps one sign:
// it reaches x <= x_M or x >= x_m (up to tol).
inline bool bendixson_check(const LimitCycle& cycle, const HypothesisReport& report,
                            double tol = 1e-9) {
    if (!report.a1_holds)
        throw std::invalid_argument("bendixson_check: requires a verified A1");
    return cycle.xi_minus <= report.x_M + tol || cycle.xi_plus >= report.x_m - tol;
}

}  // namespace lienard
