#pragma once

// Structural checks on a damping field f and its antiderivative F:
//  - two simple zeros x_M < 0 < x_m of f with df(x_M) < 0 < df(x_m);
//  - the level sets of F at F(x_M), F(x_m) re-intersecting the graph of F,
//    giving the outer abscissas x1 < x1* < x_M and x_m < x2* < x2;
//  - the derived landmarks x* = min{-x1*, x2*} and
//    r* = (x1^2 + x2^2)(F(x_M) - F(x_m)) / (x1 F(x_m) + x2 F(x_M));
//  - four sufficient uniqueness criteria (flags d1..d4) and the comparison
//    system's existence witnesses (b1..b4);
//  - the sign properties of x F(x) relative to the outer corners (p1..p4).
//
// Everything is verified numerically on a bounded search interval [-L, L];
// unboundedness of F is a growth heuristic (F(+-2L) vs F(+-L)) and can
// report false negatives for very slowly growing F.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lienard/field.hpp"
#include "lienard/roots.hpp"

namespace lienard {

struct HypothesisOptions {
    double search_half_width = 50.0;  // L
    double root_tol = 1e-12;
    int grid_n = 4096;
    double tie_rel_tol = 1e-9;        // symmetry ties in d1/d2
    double mono_slack = 1e-9;         // monotonicity slack in d3/d4
    double growth_factor = 1.5;       // unboundedness heuristic
    double witness_k_factor = 1.25;   // k = factor * max{-x1, x2}
};

namespace detail {
inline constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
}

struct A1Result {
    bool holds = false;
    double x_M = detail::nan_v;
    double x_m = detail::nan_v;
    double df_at_xM = detail::nan_v;
    double df_at_xm = detail::nan_v;
    std::vector<double> roots;  // every zero of f found in [-L, L]
};

inline A1Result check_a1(const LienardField& field, const HypothesisOptions& opts = {}) {
    const double L = opts.search_half_width;
    if (!(L > 0.0)) throw std::invalid_argument("check_a1: search interval must be positive");
    auto f = [&](double x) { return field.f(x); };
    A1Result res;
    for (const auto& br : scan_sign_changes(f, -L, L, opts.grid_n))
        res.roots.push_back(refine_root(f, br, opts.root_tol));
    if (res.roots.size() != 2) return res;
    const double r0 = res.roots[0];
    const double r1 = res.roots[1];
    if (!(r0 < -opts.root_tol && r1 > opts.root_tol)) return res;
    res.x_M = r0;
    res.x_m = r1;
    res.df_at_xM = field.df(r0);
    res.df_at_xm = field.df(r1);
    res.holds = res.df_at_xM < 0.0 && res.df_at_xm > 0.0;
    return res;
}

struct FZeros {
    double x1_star = detail::nan_v;  // in (x1, x_M)
    double x2_star = detail::nan_v;  // in (x_m, x2)
};

// Nonzero zeros of F. F is positive on [x1*, x_M] side and negative on the
// [x_m, x2*] side, so each is bracketed by outward expansion from the fold.
inline std::optional<FZeros> find_F_zeros(const LienardField& field, const A1Result& a1,
                                          const HypothesisOptions& opts = {}) {
    if (!a1.holds) throw std::invalid_argument("find_F_zeros: requires a verified A1");
    auto Fv = [&](double x) { return field.F(x); };
    const double step0 = 0.25 * (a1.x_m - a1.x_M);
    auto right = expand_bracket(Fv, a1.x_m, +1, opts.search_half_width, step0);
    auto left = expand_bracket(Fv, a1.x_M, -1, -opts.search_half_width, step0);
    if (!right || !left) return std::nullopt;
    FZeros z;
    z.x2_star = refine_root(Fv, *right, opts.root_tol);
    z.x1_star = refine_root(Fv, *left, opts.root_tol);
    return z;
}

struct A2Result {
    bool holds = false;
    double x1 = detail::nan_v;  // F(x1) = F(x_m), x1 < x_M
    double x2 = detail::nan_v;  // F(x2) = F(x_M), x2 > x_m
};

inline A2Result check_a2(const LienardField& field, const A1Result& a1,
                         const HypothesisOptions& opts = {}) {
    if (!a1.holds) throw std::invalid_argument("check_a2: requires a verified A1");
    const double FxM = field.F(a1.x_M);
    const double Fxm = field.F(a1.x_m);
    const double step0 = 0.25 * (a1.x_m - a1.x_M);
    A2Result res;
    auto g_right = [&](double x) { return field.F(x) - FxM; };
    auto g_left = [&](double x) { return field.F(x) - Fxm; };
    auto br = expand_bracket(g_right, a1.x_m, +1, opts.search_half_width, step0);
    auto bl = expand_bracket(g_left, a1.x_M, -1, -opts.search_half_width, step0);
    if (!br || !bl) return res;
    res.x2 = refine_root(g_right, *br, opts.root_tol);
    res.x1 = refine_root(g_left, *bl, opts.root_tol);
    res.holds = true;
    return res;
}

struct Landmarks {
    double x_star = detail::nan_v;
    double r_star = detail::nan_v;
};

inline Landmarks landmarks(const LienardField& field, const A1Result& a1,
                           const FZeros& fz, const A2Result& a2) {
    if (!a1.holds || !a2.holds)
        throw std::invalid_argument("landmarks: requires verified A1 and A2");
    Landmarks lm;
    lm.x_star = std::min(-fz.x1_star, fz.x2_star);
    const double FxM = field.F(a1.x_M);
    const double Fxm = field.F(a1.x_m);
    const double den = a2.x1 * Fxm + a2.x2 * FxM;
    if (!(den > 0.0))
        throw std::runtime_error("landmarks: nonpositive denominator in r* "
                                 "(inconsistent upstream roots)");
    lm.r_star = (a2.x1 * a2.x1 + a2.x2 * a2.x2) * (FxM - Fxm) / den;
    if (!(lm.r_star > lm.x_star))
        throw std::runtime_error("landmarks: r* <= x* (inconsistent upstream roots)");
    return lm;
}

struct UniquenessFlags {
    bool d1 = false;  // F unbounded both ways and x1* = -x2*
    bool d2 = false;  // F unbounded both ways and x_M = -x_m
    bool d3 = false;  // f nonincreasing on (-inf, 0), nondecreasing on (0, inf)
    bool d4 = false;  // F(x)/x monotone outside the dead band and x2* <= -x1*
    bool f_unbounded_pos = false;
    bool f_unbounded_neg = false;
    std::optional<double> d3_witness;
    std::optional<double> d4_witness;
    bool any() const { return d1 || d2 || d3 || d4; }
};

inline UniquenessFlags check_uniqueness(const LienardField& field, const A1Result& a1,
                                        const FZeros& fz,
                                        const HypothesisOptions& opts = {}) {
    if (!a1.holds) throw std::invalid_argument("check_uniqueness: requires a verified A1");
    UniquenessFlags u;
    const double L = opts.search_half_width;
    const double F_L = field.F(L);
    const double F_2L = field.F(2.0 * L);
    const double F_mL = field.F(-L);
    const double F_m2L = field.F(-2.0 * L);
    u.f_unbounded_pos = F_L > 0.0 && F_2L > opts.growth_factor * F_L;
    u.f_unbounded_neg = F_mL < 0.0 && F_m2L < opts.growth_factor * F_mL;
    const bool unbounded = u.f_unbounded_pos && u.f_unbounded_neg;

    u.d1 = unbounded &&
           std::abs(fz.x1_star + fz.x2_star) <= opts.tie_rel_tol * fz.x2_star;
    u.d2 = unbounded && std::abs(a1.x_M + a1.x_m) <= opts.tie_rel_tol * a1.x_m;

    u.d3 = true;
    const int n = opts.grid_n;
    for (int i = 0; i < n && u.d3; ++i) {
        const double x = -L + L * i / n;  // [-L, 0)
        if (field.df(x) > opts.mono_slack) {
            u.d3 = false;
            u.d3_witness = x;
        }
    }
    for (int i = 1; i <= n && u.d3; ++i) {
        const double x = L * i / n;  // (0, L]
        if (field.df(x) < -opts.mono_slack) {
            u.d3 = false;
            u.d3_witness = x;
        }
    }

    // d/dx (F(x)/x) has the sign of x f(x) - F(x) on each half-line.
    u.d4 = fz.x2_star <= -fz.x1_star * (1.0 + opts.tie_rel_tol);
    auto slope = [&](double x) { return x * field.f(x) - field.F(x); };
    for (int i = 0; i < n && u.d4; ++i) {
        const double x = -L + L * i / n;  // [-L, 0)
        if (slope(x) > opts.mono_slack * std::max(1.0, std::abs(field.F(x)))) {
            u.d4 = false;
            u.d4_witness = x;
        }
    }
    for (int i = 0; i <= n && u.d4; ++i) {
        const double x = fz.x2_star + (L - fz.x2_star) * i / n;  // [x2*, L]
        if (slope(x) < -opts.mono_slack * std::max(1.0, std::abs(field.F(x)))) {
            u.d4 = false;
            u.d4_witness = x;
        }
    }
    return u;
}

struct WitnessFlags {
    bool b1 = false;  // local Lipschitz data (holds by construction here)
    bool b2 = false;  // restoring term x with potential x^2/2 (by construction)
    bool b3 = false;  // F > 0 on [x_M, 0), F < 0 on (0, x_m]
    bool b4 = false;  // F <= F(x_m) left of -k, F >= F(x_M) right of k
    double k = detail::nan_v;
    double level_lo = detail::nan_v;  // F(x_m)
    double level_hi = detail::nan_v;  // F(x_M)
    double a_1 = detail::nan_v;       // x_M
    double a_2 = detail::nan_v;       // x_m
};

inline WitnessFlags check_witnesses(const LienardField& field, const A1Result& a1,
                                    const A2Result& a2,
                                    const HypothesisOptions& opts = {}) {
    if (!a1.holds) throw std::invalid_argument("check_witnesses: requires a verified A1");
    WitnessFlags w;
    w.b1 = true;
    w.b2 = true;
    w.a_1 = a1.x_M;
    w.a_2 = a1.x_m;
    w.level_lo = field.F(a1.x_m);
    w.level_hi = field.F(a1.x_M);

    const int n = opts.grid_n;
    w.b3 = true;
    for (int i = 0; i < n && w.b3; ++i) {
        const double x = a1.x_M + (0.0 - a1.x_M) * i / n;  // [x_M, 0)
        if (!(field.F(x) > 0.0)) w.b3 = false;
    }
    for (int i = 1; i <= n && w.b3; ++i) {
        const double x = a1.x_m * i / n;  // (0, x_m]
        if (!(field.F(x) < 0.0)) w.b3 = false;
    }

    if (a2.holds) {
        const double L = opts.search_half_width;
        w.k = opts.witness_k_factor * std::max(-a2.x1, a2.x2);
        if (w.k < L) {
            w.b4 = true;
            for (int i = 0; i <= n && w.b4; ++i) {
                const double x = -L + (-w.k + L) * i / n;  // [-L, -k]
                if (!(field.F(x) <= w.level_lo)) w.b4 = false;
            }
            for (int i = 0; i <= n && w.b4; ++i) {
                const double x = w.k + (L - w.k) * i / n;  // [k, L]
                if (!(field.F(x) >= w.level_hi)) w.b4 = false;
            }
        }
    }
    return w;
}

struct SignProperties {
    bool p1 = false, p2 = false, p3 = false, p4 = false;
    // Minimal slack of x F(x) over the required bound, per property.
    double margin1 = detail::nan_v, margin2 = detail::nan_v;
    double margin3 = detail::nan_v, margin4 = detail::nan_v;
};

inline SignProperties check_sign_properties(const LienardField& field, const A1Result& a1,
                                            const A2Result& a2,
                                            const HypothesisOptions& opts = {}) {
    if (!a1.holds || !a2.holds)
        throw std::invalid_argument("check_sign_properties: requires verified A1 and A2");
    const double L = opts.search_half_width;
    const double FxM = field.F(a1.x_M);
    const double Fxm = field.F(a1.x_m);
    const int n = opts.grid_n;
    auto sweep = [&](double lo, double hi, double bound, bool open_lo, bool open_hi) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i) {
            if ((open_lo && i == 0) || (open_hi && i == n)) continue;
            const double x = lo + (hi - lo) * i / n;
            worst = std::min(worst, x * field.F(x) - bound);
        }
        return worst;
    };
    SignProperties sp;
    sp.margin1 = sweep(-L, a2.x1, a2.x1 * Fxm, false, true);
    sp.margin2 = sweep(a2.x1, 0.0, a2.x1 * FxM, true, true);
    sp.margin3 = sweep(0.0, a2.x2, a2.x2 * Fxm, true, true);
    sp.margin4 = sweep(a2.x2, L, a2.x2 * FxM, true, false);
    sp.p1 = sp.margin1 > 0.0;
    sp.p2 = sp.margin2 > 0.0;
    sp.p3 = sp.margin3 > 0.0;
    sp.p4 = sp.margin4 > 0.0;
    return sp;
}

enum class UniquenessStatus { proved_unique, unknown, not_checked };

struct HypothesisReport {
    bool a1_holds = false;
    bool a2_holds = false;
    double x_M = detail::nan_v, x_m = detail::nan_v;
    double df_at_xM = detail::nan_v, df_at_xm = detail::nan_v;
    double F_at_xM = detail::nan_v, F_at_xm = detail::nan_v;
    double x1_star = detail::nan_v, x2_star = detail::nan_v;
    double x1 = detail::nan_v, x2 = detail::nan_v;
    double x_star = detail::nan_v, r_star = detail::nan_v;
    UniquenessFlags uniqueness;
    WitnessFlags witnesses;
    SignProperties sign_properties;
    UniquenessStatus uniqueness_status = UniquenessStatus::not_checked;
    double search_lo = detail::nan_v, search_hi = detail::nan_v;
    std::vector<double> f_roots;  // diagnostic when a1 fails
};

// Runs the full verdict chain; stops early when a prerequisite fails, leaving
// downstream values NaN and flags false.
inline HypothesisReport analyze_hypotheses(const LienardField& field,
                                           const HypothesisOptions& opts = {}) {
    HypothesisReport rep;
    rep.search_lo = -opts.search_half_width;
    rep.search_hi = opts.search_half_width;
    const A1Result a1 = check_a1(field, opts);
    rep.f_roots = a1.roots;
    rep.a1_holds = a1.holds;
    if (!a1.holds) return rep;
    rep.x_M = a1.x_M;
    rep.x_m = a1.x_m;
    rep.df_at_xM = a1.df_at_xM;
    rep.df_at_xm = a1.df_at_xm;
    rep.F_at_xM = field.F(a1.x_M);
    rep.F_at_xm = field.F(a1.x_m);

    const auto fz = find_F_zeros(field, a1, opts);
    const A2Result a2 = check_a2(field, a1, opts);
    rep.a2_holds = a2.holds && fz.has_value();
    rep.witnesses = check_witnesses(field, a1, a2, opts);
    if (!rep.a2_holds) return rep;
    rep.x1_star = fz->x1_star;
    rep.x2_star = fz->x2_star;
    rep.x1 = a2.x1;
    rep.x2 = a2.x2;
    const Landmarks lm = landmarks(field, a1, *fz, a2);
    rep.x_star = lm.x_star;
    rep.r_star = lm.r_star;

    rep.uniqueness = check_uniqueness(field, a1, *fz, opts);
    rep.uniqueness_status = rep.uniqueness.any() ? UniquenessStatus::proved_unique
                                                 : UniquenessStatus::unknown;
    rep.sign_properties = check_sign_properties(field, a1, a2, opts);
    return rep;
}

}  // namespace lienard
