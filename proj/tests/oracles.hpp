#pragma once

// Slow, independent reference implementations used only by the test suite to
// cross-check the library's numerics. Nothing here shares code with the
// library beyond basic types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return (f(a) + f(b) + 4.0 * odd + 2.0 * even) * h / 3.0;
}

inline double riemann_mid(const std::function<double(double)>& f, double a, double b,
                          long n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

// Principal branch of the Lambert W function on [-1/e, inf), by Newton
// iteration from a log-based initial guess.
inline double lambert_w0(double x) {
    if (x < -std::exp(-1.0)) throw std::domain_error("lambert_w0: x < -1/e");
    double w = x < 1.0 ? x / (1.0 + x) : std::log(x);
    if (!(w > -1.0)) w = -0.9;
    for (int i = 0; i < 100; ++i) {
        const double ew = std::exp(w);
        const double err = w * ew - x;
        const double step = err / (ew * (w + 1.0) - err * (w + 2.0) / (2.0 * (w + 1.0)));
        w -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

// Brute-force symmetric Hausdorff distance between point clouds.
inline double hausdorff_points(const std::vector<std::pair<double, double>>& A,
                               const std::vector<std::pair<double, double>>& B) {
    auto directed = [](const std::vector<std::pair<double, double>>& from,
                       const std::vector<std::pair<double, double>>& to) {
        double worst = 0.0;
        for (const auto& [ax, ay] : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [bx, by] : to)
                best = std::min(best, std::hypot(ax - bx, ay - by));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(A, B), directed(B, A));
}

inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline std::mt19937 make_rng(std::uint32_t seed) { return std::mt19937(seed); }

}  // namespace oracle
