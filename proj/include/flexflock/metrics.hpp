// Diagnostics quantifying the closed loop's claims: spacing errors, the
// deviation energies E and E_ASP, the Lyapunov value, connectivity, the
// minimum inter-agent gradient gap, and peak control magnitudes.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "flexflock/controller.hpp"
#include "flexflock/graph.hpp"
#include "flexflock/potential.hpp"
#include "flexflock/spacing.hpp"

namespace flexflock {

struct MetricsSnapshot {
    double t = 0.0;
    double sum_abs_e = 0.0;
    double max_abs_e = 0.0;
    double E_dev = 0.0;   // mean-square deviation from d_nom, over (|E|+1)
    double E_asp = 0.0;   // mean-square spacing error, over (|E|+1)
    double V_lyap = 0.0;  // sum_i P_i plus the constant orientation term N/2
    bool connected = false;
    double min_mu = 0.0;  // over connected pairs
    double max_abs_v = 0.0;
    double max_abs_omega = 0.0;
};

using EdgeStateMap = std::map<EdgeKey, EdgeState>;

// E = 1/(|E|+1) * sum over current edges of (mu - d_nom)^2.
inline double deviation_energy(std::span<const EdgeState> edges, double d_nom) {
    double s = 0.0;
    for (const auto& e : edges) s += (e.mu - d_nom) * (e.mu - d_nom);
    return s / (static_cast<double>(edges.size()) + 1.0);
}

// E_ASP = 1/(|E|+1) * sum over current edges of e^2.
inline double asp_energy(std::span<const EdgeState> edges) {
    double s = 0.0;
    for (const auto& e : edges) s += e.e * e.e;
    return s / (static_cast<double>(edges.size()) + 1.0);
}

// V = sum_i P_i + N/2. Each undirected edge contributes from both endpoints
// (the per-agent sums each count their incident edges), and the orientation
// terms cos^2 + sin^2 contribute the constant N/2 exactly, so they are added
// analytically instead of from state.
inline double lyapunov(std::span<const EdgeState> edges, const PotentialKind& kind,
                       int n_agents) {
    double s = 0.0;
    for (const auto& e : edges) s += 2.0 * potential_value(kind, e);
    return s + 0.5 * static_cast<double>(n_agents);
}

// Optional diagnostic: H_ij * K_ij = (dP/de * tanh(e/2)) * (ds/dd), the
// spacing-adaptation dissipation term; non-negative for all states.
inline double hk_product(const PotentialKind& kind, const EdgeState& edge,
                         const SpacingParams& params) {
    return dP_de(kind, edge) * d_rate(edge.e) * ds_dd(edge.d, params);
}

inline MetricsSnapshot snapshot(double t, const EdgeStateMap& edges, const Topology& topo,
                                std::span<const ControlInput> controls,
                                const PotentialKind& kind, double d_nom) {
    MetricsSnapshot m;
    m.t = t;
    std::vector<EdgeState> flat;
    flat.reserve(edges.size());
    for (const auto& [key, st] : edges) flat.push_back(st);
    for (const auto& st : flat) {
        m.sum_abs_e += std::abs(st.e);
        m.max_abs_e = std::max(m.max_abs_e, std::abs(st.e));
    }
    m.E_dev = deviation_energy(flat, d_nom);
    m.E_asp = asp_energy(flat);
    m.V_lyap = lyapunov(flat, kind, topo.n_agents);
    m.connected = is_connected(topo);
    m.min_mu = flat.empty() ? 0.0
                            : std::min_element(flat.begin(), flat.end(),
                                               [](const EdgeState& a, const EdgeState& b) {
                                                   return a.mu < b.mu;
                                               })
                                  ->mu;
    for (const auto& c : controls) {
        m.max_abs_v = std::max(m.max_abs_v, std::abs(c.v));
        m.max_abs_omega = std::max(m.max_abs_omega, std::abs(c.omega));
    }
    return m;
}

}  // namespace flexflock
