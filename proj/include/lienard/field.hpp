#pragma once

// Damping-coefficient families f for the oscillator x'' + l f(x) x' + x = 0
// and their auxiliary antiderivative F(x) = int_0^x f(s) ds.
//
// Families with closed-form F use it; otherwise F falls back to adaptive
// quadrature from 0 (so F(0) == 0 exactly either way). Generic callables may
// be merely continuous; their derivative is a central difference with
// h = 1e-6 * max(1, |x|) unless an analytic derivative is supplied.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lienard/quadrature.hpp"

namespace lienard {

enum class Family { polynomial, rational, exp_family, gauss_family, generic };

namespace poly {

// Coefficients in ascending order: c[i] multiplies x^i.
inline double eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

inline std::vector<double> antiderivative(const std::vector<double>& c) {
    std::vector<double> a(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
    return a;
}

inline std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Degree after dropping trailing zero coefficients; -1 for the zero polynomial.
inline int degree(const std::vector<double>& c) {
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != 0.0) return static_cast<int>(i);
    return -1;
}

}  // namespace poly

class LienardField {
public:
    // f(x) = sum c[i] x^i.
    static LienardField polynomial(std::vector<double> coeffs) {
        if (coeffs.empty())
            throw std::invalid_argument("polynomial family: empty coefficient list");
        LienardField fld(Family::polynomial);
        fld.df_coeffs_ = poly::derivative(coeffs);
        fld.F_coeffs_ = poly::antiderivative(coeffs);
        fld.f_coeffs_ = std::move(coeffs);
        fld.has_poly_F_ = true;
        return fld;
    }

    // f(x) = (x - x_M)(x - x_m) p(x) / q(x); requires x_M < 0 < x_m,
    // deg q < 2 + deg p, and p*q > 0 with q rootless on the check interval
    // (verified by dense sampling).
    static LienardField rational(double x_M, double x_m, std::vector<double> p,
                                 std::vector<double> q, double check_half_width = 50.0,
                                 int check_samples = 4096) {
        if (!(x_M < 0.0 && 0.0 < x_m))
            throw std::invalid_argument("rational family: requires x_M < 0 < x_m");
        const int dp = poly::degree(p);
        const int dq = poly::degree(q);
        if (dp < 0 || dq < 0)
            throw std::invalid_argument("rational family: p and q must be nonzero");
        if (!(dq < 2 + dp))
            throw std::invalid_argument("rational family: requires deg q < 2 + deg p");
        const double W = check_half_width;
        double q_prev = poly::eval(q, -W);
        for (int i = 0; i <= check_samples; ++i) {
            const double x = -W + 2.0 * W * i / check_samples;
            const double qv = poly::eval(q, x);
            const double pv = poly::eval(p, x);
            if (qv == 0.0 || (qv < 0.0) != (q_prev < 0.0))
                throw std::invalid_argument(
                    "rational family: q has a root near x = " + std::to_string(x));
            if (!(pv * qv > 0.0))
                throw std::invalid_argument(
                    "rational family: p*q <= 0 at x = " + std::to_string(x));
            q_prev = qv;
        }
        LienardField fld(Family::rational);
        fld.num_coeffs_ = poly::mul(poly::mul({-x_M, 1.0}, {-x_m, 1.0}), p);
        fld.dnum_coeffs_ = poly::derivative(fld.num_coeffs_);
        fld.q_coeffs_ = std::move(q);
        fld.dq_coeffs_ = poly::derivative(fld.q_coeffs_);
        fld.p_coeffs_ = std::move(p);
        fld.rational_xM_ = x_M;
        fld.rational_xm_ = x_m;
        if (dq == 0) {
            fld.F_coeffs_ = poly::antiderivative(fld.num_coeffs_);
            for (double& c : fld.F_coeffs_) c /= fld.q_coeffs_[0];
            fld.has_poly_F_ = true;
        }
        return fld;
    }

    // f(x) = e^x + e^{-x} - b with b > 2; F(x) = e^x - e^{-x} - b x.
    static LienardField exp_family(double b) {
        if (!(b > 2.0)) throw std::invalid_argument("exp family: requires b > 2");
        LienardField fld(Family::exp_family);
        fld.param_ = b;
        return fld;
    }

    // f(x) = (2x^2 - 1) e^{-x^2} + a with 0 < a < 1; F(x) = x (a - e^{-x^2}).
    static LienardField gauss_family(double a) {
        if (!(a > 0.0 && a < 1.0))
            throw std::invalid_argument("gauss family: requires 0 < a < 1");
        LienardField fld(Family::gauss_family);
        fld.param_ = a;
        return fld;
    }

    // Arbitrary callable; df and F are optional analytic companions. A
    // supplied F must satisfy F(0) == 0 exactly.
    static LienardField generic(std::function<double(double)> f,
                                std::function<double(double)> df = {},
                                std::function<double(double)> F = {}) {
        if (!f) throw std::invalid_argument("generic family: f callable required");
        if (F && F(0.0) != 0.0)
            throw std::invalid_argument("generic family: supplied F must vanish at 0");
        LienardField fld(Family::generic);
        fld.f_fn_ = std::move(f);
        fld.df_fn_ = std::move(df);
        fld.F_fn_ = std::move(F);
        return fld;
    }

    double f(double x) const {
        switch (family_) {
            case Family::polynomial: return poly::eval(f_coeffs_, x);
            case Family::rational:
                return poly::eval(num_coeffs_, x) / poly::eval(q_coeffs_, x);
            case Family::exp_family: return std::exp(x) + std::exp(-x) - param_;
            case Family::gauss_family:
                return (2.0 * x * x - 1.0) * std::exp(-x * x) + param_;
            case Family::generic: return f_fn_(x);
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    double df(double x) const {
        switch (family_) {
            case Family::polynomial: return poly::eval(df_coeffs_, x);
            case Family::rational: {
                const double qv = poly::eval(q_coeffs_, x);
                return (poly::eval(dnum_coeffs_, x) * qv -
                        poly::eval(num_coeffs_, x) * poly::eval(dq_coeffs_, x)) /
                       (qv * qv);
            }
            case Family::exp_family: return std::exp(x) - std::exp(-x);
            case Family::gauss_family:
                return 2.0 * x * (3.0 - 2.0 * x * x) * std::exp(-x * x);
            case Family::generic: {
                if (df_fn_) return df_fn_(x);
                const double h = 1e-6 * std::max(1.0, std::abs(x));
                return (f_fn_(x + h) - f_fn_(x - h)) / (2.0 * h);
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    double F(double x) const {
        switch (family_) {
            case Family::polynomial: return poly::eval(F_coeffs_, x);
            case Family::rational:
                if (has_poly_F_) return poly::eval(F_coeffs_, x);
                break;
            case Family::exp_family: return std::exp(x) - std::exp(-x) - param_ * x;
            case Family::gauss_family: return x * (param_ - std::exp(-x * x));
            case Family::generic:
                if (F_fn_) return F_fn_(x);
                break;
        }
        if (x == 0.0) return 0.0;
        return integrate_adaptive([this](double s) { return f(s); }, 0.0, x, quad_tol_);
    }

    Family family() const { return family_; }
    double quadrature_tol() const { return quad_tol_; }
    void set_quadrature_tol(double tol) {
        if (!(tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
        quad_tol_ = tol;
    }

private:
    explicit LienardField(Family fam) : family_(fam) {}

    Family family_;
    double param_ = 0.0;
    double quad_tol_ = 1e-12;

    std::vector<double> f_coeffs_, df_coeffs_, F_coeffs_;
    bool has_poly_F_ = false;

    std::vector<double> p_coeffs_, q_coeffs_, dq_coeffs_, num_coeffs_, dnum_coeffs_;
    double rational_xM_ = 0.0, rational_xm_ = 0.0;

    std::function<double(double)> f_fn_, df_fn_, F_fn_;
};

inline LienardField van_der_pol() { return LienardField::polynomial({-1.0, 0.0, 1.0}); }

}  // namespace lienard
