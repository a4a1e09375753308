#pragma once

// Quadrature kernels: adaptive Gauss-Kronrod 7-15 for antiderivatives, and
// the weighted rules used by the averaging integrals (Gauss-Chebyshev first
// and second kind, periodic trapezoid). The escalating wrappers double the
// node count until two successive levels agree to tolerance.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lienard {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct QuadEstimate {
    double value;
    double error;
};

// 15-point Kronrod with embedded 7-point Gauss on [a, b].
template <class F>
QuadEstimate gauss_kronrod_15(F&& f, double a, double b) {
    static constexpr double xgk[8] = {
        0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
        0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
        0.2077849550078985, 0.0};
    static constexpr double wgk[8] = {
        0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
        0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
        0.2044329400752989, 0.2094821410847278};
    static constexpr double wg[4] = {
        0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
        0.4179591836734694};

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double res_k = wgk[7] * fc;
    double res_g = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        res_k += wgk[j] * (f1 + f2);
        if (j % 2 == 1) res_g += wg[j / 2] * (f1 + f2);
    }
    return {res_k * h, std::abs((res_k - res_g) * h)};
}

namespace detail {

template <class F>
double adapt_gk(F& f, double a, double b, double tol, int depth, int max_depth) {
    const auto est = gauss_kronrod_15(f, a, b);
    if (est.error <= tol || est.error <= 1e-15 * std::abs(est.value)) return est.value;
    if (depth >= max_depth)
        throw std::runtime_error("integrate_adaptive: refinement did not converge");
    const double m = 0.5 * (a + b);
    return adapt_gk(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           adapt_gk(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Adaptive bisection to an absolute tolerance; a and b may be in either order.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                          int max_depth = 48) {
    if (a == b) return 0.0;
    if (a > b) return -integrate_adaptive(f, b, a, abs_tol, max_depth);
    return detail::adapt_gk(f, a, b, abs_tol, 0, max_depth);
}

// Fixed-order rule for \int_{-1}^{1} sqrt(1-s^2) g(s) ds.
template <class G>
double chebyshev2_fixed(G&& g, int n) {
    const double freq = pi / (n + 1);
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double si = std::cos(i * freq);
        const double sn = std::sin(i * freq);
        acc += freq * sn * sn * g(si);
    }
    return acc;
}

// Fixed-order rule for \int_{-1}^{1} g(s) / sqrt(1-s^2) ds.
template <class G>
double chebyshev1_fixed(G&& g, int n) {
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) acc += g(std::cos((2 * i - 1) * pi / (2 * n)));
    return acc * (pi / n);
}

// Fixed-order trapezoid rule for a 2*pi-periodic integrand over one period.
template <class G>
double periodic_trapezoid_fixed(G&& g, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += g(two_pi * i / n);
    return acc * (two_pi / n);
}

struct EscalatedQuad {
    double value;
    int nodes;
};

// eval(n) computes one quadrature level; node counts double from n0 until two
// successive levels agree to tol.
template <class Eval>
EscalatedQuad escalate_doubling(Eval&& eval, double tol, int n0, int n_max,
                                const char* what) {
    double prev = eval(n0);
    for (int n = 2 * n0; n <= n_max; n *= 2) {
        const double cur = eval(n);
        if (std::abs(cur - prev) <= tol) return {cur, n};
        prev = cur;
    }
    throw std::runtime_error(std::string(what) +
                             ": quadrature did not converge within the node budget");
}

}  // namespace lienard
