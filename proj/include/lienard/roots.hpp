#pragma once

// Bracketed scalar root finding and one-dimensional minimization helpers.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lienard {

// A sign change of f between lo and hi (f(lo)*f(hi) < 0), or an exact zero
// when lo == hi.
struct SignChange {
    double lo;
    double hi;
};

// Bisection on [lo, hi] given f(lo), f(hi) of opposite sign. Refines to an
// absolute width tolerance on x.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo, double f_hi,
              double tol = 1e-12, int max_iter = 200) {
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0))
        throw std::invalid_argument("bisect: endpoints do not bracket a sign change");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    return bisect(f, lo, hi, f_lo, f_hi, tol, max_iter);
}

// Uniform grid scan for sign changes of f on [lo, hi]; n intervals. Exact
// zeros at grid nodes are reported as degenerate brackets, once each.
template <class F>
std::vector<SignChange> scan_sign_changes(F&& f, double lo, double hi, int n) {
    if (!(hi > lo) || n < 1)
        throw std::invalid_argument("scan_sign_changes: bad interval or grid size");
    std::vector<SignChange> out;
    double x_prev = lo;
    double f_prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double fx = f(x);
        if (f_prev == 0.0) {
            if (out.empty() || out.back().hi < x_prev) out.push_back({x_prev, x_prev});
        } else if (fx != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
            out.push_back({x_prev, x});
        }
        x_prev = x;
        f_prev = fx;
    }
    if (f_prev == 0.0 && (out.empty() || out.back().hi < x_prev))
        out.push_back({x_prev, x_prev});
    return out;
}

template <class F>
double refine_root(F&& f, const SignChange& br, double tol = 1e-12) {
    if (br.lo == br.hi) return br.lo;
    return bisect(f, br.lo, br.hi, tol);
}

// Walk outward from `from` in direction dir (+1 or -1), doubling the step,
// until g changes sign or the limit is passed. Bracket is returned ordered.
template <class G>
std::optional<SignChange> expand_bracket(G&& g, double from, int dir, double limit,
                                         double step0) {
    double g_prev = g(from);
    if (g_prev == 0.0) return SignChange{from, from};
    double prev = from;
    double step = step0;
    while (true) {
        double next = from + dir * step;
        bool clipped = false;
        if (dir > 0 ? next >= limit : next <= limit) {
            next = limit;
            clipped = true;
        }
        const double g_next = g(next);
        if (g_next == 0.0) return SignChange{next, next};
        if ((g_next < 0.0) != (g_prev < 0.0))
            return dir > 0 ? SignChange{prev, next} : SignChange{next, prev};
        if (clipped) return std::nullopt;
        prev = next;
        g_prev = g_next;
        step *= 2.0;
    }
}

// Golden-section minimization on [lo, hi]; returns the midpoint of the final
// bracket. Absolute tolerance on x.
template <class F>
double golden_section_min(F&& f, double lo, double hi, double tol = 1e-10,
                          int max_iter = 200) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && b - a > tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace lienard
