// Adaptive spacing policy: per-edge auxiliary state d_ij, scaling factor
// s_ij = exp(lambda * tanh((d_ij - d_nom)/2)), desired gap D* = d_nom * s_ij,
// spacing error e_ij = mu_ij - D*, and their rates.
#pragma once

#include <cmath>

#include "flexflock/core.hpp"

namespace flexflock {

struct SpacingParams {
    double d_nom = 2.0;   // nominal gap, gradient-space units
    double lambda = 1.0;  // positive scaling parameter

    bool operator==(const SpacingParams&) const = default;
};

// Per-edge ASP memory. d is the integrated auxiliary state; s, d_star and e
// are derived and kept consistent by refresh_edge_state.
struct EdgeState {
    double d = 0.0;       // auxiliary spacing state d_ij
    double s = 1.0;       // scaling factor, in (e^-lambda, e^lambda)
    double d_star = 0.0;  // desired gap d_nom * s
    double mu = 0.0;      // current gradient difference ||X_j - X_i||
    double e = 0.0;       // spacing error mu - d_star
};

// s_ij = exp(lambda * tanh((d - d_nom)/2)); strictly inside (e^-l, e^l).
inline double scaling_factor(double d_ij, const SpacingParams& p) {
    return std::exp(p.lambda * std::tanh(0.5 * (d_ij - p.d_nom)));
}

// D*_ij = d_nom * s_ij.
inline double desired_gap(double s_ij, const SpacingParams& p) {
    if (!(s_ij > std::exp(-p.lambda) && s_ij < std::exp(p.lambda)))
        throw InvalidArgument("scaling factor outside (e^-lambda, e^lambda)");
    return p.d_nom * s_ij;
}

// e_ij = mu_ij - D*_ij.
inline double spacing_error(double mu, double d_star) { return mu - d_star; }

// d-dot = tanh(e/2), strictly in (-1, 1); zero iff e = 0.
inline double d_rate(double e) { return std::tanh(0.5 * e); }

// ds/dd = s * 2*lambda*exp(-u) / (1 + exp(-u))^2 with u = d - d_nom.
// Evaluated as s * lambda/2 * sech^2(u/2), the same expression in a form
// that cannot overflow for large |u|.
inline double ds_dd(double d_ij, const SpacingParams& p) {
    const double u = d_ij - p.d_nom;
    const double ch = std::cosh(0.5 * u);
    return scaling_factor(d_ij, p) * 0.5 * p.lambda / (ch * ch);
}

// Chain rule: s-dot = (ds/dd) * d-dot.
inline double s_rate(const EdgeState& edge, const SpacingParams& p) {
    return ds_dd(edge.d, p) * d_rate(edge.e);
}

// Rebuild the derived fields of an edge state from its authoritative inputs
// (d and mu). Keeps the s/d_star/e invariants true by construction.
inline EdgeState make_edge_state(double d_ij, double mu, const SpacingParams& p) {
    EdgeState st;
    st.d = d_ij;
    st.mu = mu;
    st.s = scaling_factor(d_ij, p);
    st.d_star = p.d_nom * st.s;
    st.e = spacing_error(mu, st.d_star);
    return st;
}

}  // namespace flexflock
