// Scalar-field oracles: closed-form evaluation of J, its gradient and its
// Hessian for the two benchmark fields and general 2D polynomials.
#pragma once

#include <algorithm>
#include <vector>

#include "flexflock/core.hpp"

namespace flexflock {

enum class FieldKind { QuadraticBowl, CubicBench, Polynomial2D };

struct PolyTerm {
    int ix = 0;  // exponent of x
    int iy = 0;  // exponent of y
    double coeff = 0.0;

    bool operator==(const PolyTerm&) const = default;
};

inline constexpr int kMaxPolyDegree = 6;

// A twice continuously differentiable scalar field J(x, y). All supported
// fields are polynomials, so gradients and Hessians are exact.
struct FieldModel {
    FieldKind kind = FieldKind::QuadraticBowl;
    std::vector<PolyTerm> terms;  // Polynomial2D only, sorted by (ix, iy)

    bool operator==(const FieldModel&) const = default;

    static FieldModel quadratic_bowl() { return {FieldKind::QuadraticBowl, {}}; }
    static FieldModel cubic_bench() { return {FieldKind::CubicBench, {}}; }

    static FieldModel polynomial(std::vector<PolyTerm> terms) {
        for (const auto& t : terms) {
            if (t.ix < 0 || t.iy < 0)
                throw InvalidArgument("polynomial exponents must be non-negative");
            if (t.ix + t.iy > kMaxPolyDegree)
                throw InvalidArgument("polynomial total degree exceeds cap 6");
        }
        std::sort(terms.begin(), terms.end(), [](const PolyTerm& a, const PolyTerm& b) {
            return a.ix != b.ix ? a.ix < b.ix : a.iy < b.iy;
        });
        return {FieldKind::Polynomial2D, std::move(terms)};
    }
};

namespace detail {

inline double ipow(double base, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= base;
    return r;
}

}  // namespace detail

inline double eval(const FieldModel& f, Vec2 p) {
    switch (f.kind) {
        case FieldKind::QuadraticBowl:
            return -p.x * p.x - p.y * p.y;
        case FieldKind::CubicBench:
            return -p.y * p.y * p.y - 2.0 * (p.x * p.x + p.y);
        case FieldKind::Polynomial2D: {
            double s = 0.0;
            for (const auto& t : f.terms)
                s += t.coeff * detail::ipow(p.x, t.ix) * detail::ipow(p.y, t.iy);
            return s;
        }
    }
    throw InvalidArgument("unknown field kind");
}

inline Vec2 gradient(const FieldModel& f, Vec2 p) {
    switch (f.kind) {
        case FieldKind::QuadraticBowl:
            return {-2.0 * p.x, -2.0 * p.y};
        case FieldKind::CubicBench:
            return {-4.0 * p.x, -3.0 * p.y * p.y - 2.0};
        case FieldKind::Polynomial2D: {
            Vec2 g{0.0, 0.0};
            for (const auto& t : f.terms) {
                if (t.ix > 0)
                    g.x += t.coeff * t.ix * detail::ipow(p.x, t.ix - 1) * detail::ipow(p.y, t.iy);
                if (t.iy > 0)
                    g.y += t.coeff * t.iy * detail::ipow(p.x, t.ix) * detail::ipow(p.y, t.iy - 1);
            }
            return g;
        }
    }
    throw InvalidArgument("unknown field kind");
}

inline Mat2 hessian(const FieldModel& f, Vec2 p) {
    switch (f.kind) {
        case FieldKind::QuadraticBowl:
            return {-2.0, 0.0, 0.0, -2.0};
        case FieldKind::CubicBench:
            return {-4.0, 0.0, 0.0, -6.0 * p.y};
        case FieldKind::Polynomial2D: {
            double hxx = 0.0, hyy = 0.0, hxy = 0.0;
            for (const auto& t : f.terms) {
                if (t.ix > 1)
                    hxx += t.coeff * t.ix * (t.ix - 1) * detail::ipow(p.x, t.ix - 2) *
                           detail::ipow(p.y, t.iy);
                if (t.iy > 1)
                    hyy += t.coeff * t.iy * (t.iy - 1) * detail::ipow(p.x, t.ix) *
                           detail::ipow(p.y, t.iy - 2);
                if (t.ix > 0 && t.iy > 0)
                    hxy += t.coeff * t.ix * t.iy * detail::ipow(p.x, t.ix - 1) *
                           detail::ipow(p.y, t.iy - 1);
            }
            return {hxx, hxy, hxy, hyy};
        }
    }
    throw InvalidArgument("unknown field kind");
}

// Numerical self-test comparing the analytic derivatives against central
// finite differences. The gradient check differences field values; the
// Hessian check differences the analytic gradient (value-based second
// differences lose too many digits at small h to be a useful oracle).
struct FdReport {
    Vec2 grad_analytic;
    Vec2 grad_numeric;
    Mat2 hess_analytic;
    Mat2 hess_numeric;
    double grad_rel_error = 0.0;  // absolute error when analytic norm is 0
    double hess_rel_error = 0.0;
};

inline FdReport check_gradient_fd(const FieldModel& f, Vec2 p, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step h must be > 0");
    FdReport r;
    r.grad_analytic = gradient(f, p);
    r.grad_numeric = {
        (eval(f, {p.x + h, p.y}) - eval(f, {p.x - h, p.y})) / (2.0 * h),
        (eval(f, {p.x, p.y + h}) - eval(f, {p.x, p.y - h})) / (2.0 * h)};
    r.hess_analytic = hessian(f, p);
    const Vec2 gxp = gradient(f, {p.x + h, p.y});
    const Vec2 gxm = gradient(f, {p.x - h, p.y});
    const Vec2 gyp = gradient(f, {p.x, p.y + h});
    const Vec2 gym = gradient(f, {p.x, p.y - h});
    r.hess_numeric = {(gxp.x - gxm.x) / (2.0 * h), (gyp.x - gym.x) / (2.0 * h),
                      (gxp.y - gxm.y) / (2.0 * h), (gyp.y - gym.y) / (2.0 * h)};

    const double gerr = (r.grad_numeric - r.grad_analytic).norm();
    const double gnorm = r.grad_analytic.norm();
    r.grad_rel_error = gnorm > 0.0 ? gerr / gnorm : gerr;

    const double herr = std::hypot(std::hypot(r.hess_numeric.a11 - r.hess_analytic.a11,
                                              r.hess_numeric.a12 - r.hess_analytic.a12),
                                   std::hypot(r.hess_numeric.a21 - r.hess_analytic.a21,
                                              r.hess_numeric.a22 - r.hess_analytic.a22));
    const double hnorm = std::hypot(std::hypot(r.hess_analytic.a11, r.hess_analytic.a12),
                                    std::hypot(r.hess_analytic.a21, r.hess_analytic.a22));
    r.hess_rel_error = hnorm > 0.0 ? herr / hnorm : herr;
    return r;
}

}  // namespace flexflock
