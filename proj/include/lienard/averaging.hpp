#pragma once

// First-order averaging of the weakly damped oscillator in the polar chart
// x = r cos(t), y = -r sin(t). The radial drift per revolution is governed by
//
//   M1(r) = -2 r Fbar(r),   Fbar(r) = int_{-1}^{1} sqrt(1-s^2) f(r s) ds,
//
// and the amplitude of the emerging cycle is the unique positive zero rho of
// M1, bracketed by the landmarks (x*, r*). M1 has three equivalent
// computational routes which are kept independent for cross-validation.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lienard/field.hpp"
#include "lienard/hypothesis.hpp"
#include "lienard/quadrature.hpp"
#include "lienard/roots.hpp"

namespace lienard {

struct AveragingOptions {
    double fbar_tol = 1e-10;  // agreement between successive quadrature levels
    double m1_tol = 1e-9;
    double rho_tol = 1e-11;   // bisection tolerance on r
    int scan_points = 512;    // uniqueness scan over (0, 2 r*]
    int nodes_min = 32;
    int nodes_max = 4096;
};

inline double fbar(const LienardField& field, double r, const AveragingOptions& opts = {}) {
    if (!(r > 0.0)) throw std::invalid_argument("fbar: requires r > 0");
    auto level = [&](int n) {
        return chebyshev2_fixed([&](double s) { return field.f(r * s); }, n);
    };
    return escalate_doubling(level, opts.fbar_tol, opts.nodes_min, opts.nodes_max, "fbar")
        .value;
}

enum class M1Form { polar_f, polar_F, radical_F };

inline double m1(const LienardField& field, double r, M1Form form,
                 const AveragingOptions& opts = {}) {
    if (!(r > 0.0)) throw std::invalid_argument("m1: requires r > 0");
    switch (form) {
        case M1Form::polar_f: {
            auto level = [&](int n) {
                return periodic_trapezoid_fixed(
                    [&](double th) {
                        const double s = std::sin(th);
                        return field.f(r * std::cos(th)) * s * s;
                    },
                    n);
            };
            return -r * escalate_doubling(level, opts.m1_tol, opts.nodes_min,
                                          opts.nodes_max, "m1 polar_f")
                            .value;
        }
        case M1Form::polar_F: {
            auto level = [&](int n) {
                return periodic_trapezoid_fixed(
                    [&](double th) {
                        const double c = std::cos(th);
                        return c * field.F(r * c);
                    },
                    n);
            };
            return -escalate_doubling(level, opts.m1_tol, opts.nodes_min, opts.nodes_max,
                                      "m1 polar_F")
                        .value;
        }
        case M1Form::radical_F: {
            // Substituting x = r s turns -(2/r) int_{-r}^{r} x F(x)/sqrt(r^2-x^2) dx
            // into a Chebyshev first-kind integral, removing the endpoint
            // singularity.
            auto level = [&](int n) {
                return chebyshev1_fixed([&](double s) { return s * field.F(r * s); }, n);
            };
            return -2.0 * escalate_doubling(level, opts.m1_tol, opts.nodes_min,
                                            opts.nodes_max, "m1 radical_F")
                              .value;
        }
    }
    throw std::logic_error("m1: unknown form");
}

struct AveragedProfile {
    double rho = 0.0;
    double bracket_lo = 0.0;  // x*
    double bracket_hi = 0.0;  // r*
    std::vector<std::pair<double, double>> samples;  // (r, M1(r)) scan grid
    int quadrature_nodes = 0;
};

// Locates the zero of Fbar in (x*, r*) and certifies it is the only sign
// change of M1 on (0, 2 r*]. Multiple sign changes are an inconsistency with
// the verified hypotheses and are reported, never ignored.
inline AveragedProfile find_rho(const LienardField& field, const HypothesisReport& report,
                                const AveragingOptions& opts = {}) {
    if (!report.a1_holds || !report.a2_holds)
        throw std::invalid_argument("find_rho: requires verified A1 and A2");
    AveragedProfile prof;
    prof.bracket_lo = report.x_star;
    prof.bracket_hi = report.r_star;

    auto fb = [&](double r) { return fbar(field, r, opts); };
    const double f_lo = fb(prof.bracket_lo);
    const double f_hi = fb(prof.bracket_hi);
    if (f_lo == 0.0) {
        prof.rho = prof.bracket_lo;
    } else if (f_hi == 0.0) {
        prof.rho = prof.bracket_hi;
    } else if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw std::runtime_error("find_rho: no sign change of Fbar over (x*, r*); "
                                 "inconsistent with the verified hypotheses");
    } else {
        prof.rho = bisect(fb, prof.bracket_lo, prof.bracket_hi, f_lo, f_hi, opts.rho_tol);
    }

    auto level = [&](int n) {
        return chebyshev2_fixed([&](double s) { return field.f(prof.rho * s); }, n);
    };
    prof.quadrature_nodes =
        escalate_doubling(level, opts.fbar_tol, opts.nodes_min, opts.nodes_max, "fbar")
            .nodes;

    int sign_prev = 0;
    int changes = 0;
    for (int i = 1; i <= opts.scan_points; ++i) {
        const double r = 2.0 * prof.bracket_hi * i / opts.scan_points;
        const double m = -2.0 * r * fb(r);
        prof.samples.emplace_back(r, m);
        const int sign = m > 0.0 ? 1 : (m < 0.0 ? -1 : 0);
        if (sign != 0) {
            if (sign_prev != 0 && sign != sign_prev) ++changes;
            sign_prev = sign;
        }
    }
    const int first_sign = [&] {
        for (const auto& s : prof.samples)
            if (s.second != 0.0) return s.second > 0.0 ? 1 : -1;
        return 0;
    }();
    if (changes != 1 || first_sign != 1 || sign_prev != -1)
        throw std::runtime_error("find_rho: M1 sign pattern on (0, 2 r*] is not a single "
                                 "+ to - change; uniqueness scan failed");
    return prof;
}

// Two-sided bound pair for arctan(1/sqrt(u^2-1)) with u > 1:
// returns {1/u < arctan(...), arctan(...) < pi/(2u)}.
inline std::pair<bool, bool> arctan_bounds(double u) {
    if (!(u > 1.0)) throw std::domain_error("arctan_bounds: requires u > 1");
    const double t = std::atan(1.0 / std::sqrt(u * u - 1.0));
    return {1.0 / u < t, t < std::numbers::pi / (2.0 * u)};
}

}  // namespace lienard
