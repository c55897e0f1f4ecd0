// Flocking potentials and their derivatives: the quadratic potential for
// static graphs, the log-barrier potential for dynamic graphs, and the
// composition dP_i/dX_i consumed by the controller.
#pragma once

#include <cmath>
#include <span>

#include "flexflock/core.hpp"
#include "flexflock/spacing.hpp"

namespace flexflock {

struct PotentialKind {
    enum class Tag { Quadratic, Barrier } tag = Tag::Quadratic;
    double r = 0.0;  // Barrier only; must match the topology's sensing range

    static PotentialKind quadratic() { return {Tag::Quadratic, 0.0}; }
    static PotentialKind barrier(double r) {
        if (!(r > 0.0)) throw InvalidArgument("barrier range r must be > 0");
        return {Tag::Barrier, r};
    }
    bool is_barrier() const { return tag == Tag::Barrier; }
};

// Unit vector along X_j - X_i and its angle beta_ij.
struct EdgeGeometry {
    Vec2 o_mu;           // (X_j - X_i) / mu_ij
    double beta = 0.0;   // atan2(dXy, dXx), radians
};

inline EdgeGeometry edge_direction(Vec2 Xi, Vec2 Xj) {
    const Vec2 d = Xj - Xi;
    const double m = d.norm();
    if (m == 0.0)
        throw CollisionError("edge direction undefined: coincident gradients (mu = 0)");
    return {{d.x / m, d.y / m}, std::atan2(d.y, d.x)};
}

namespace detail {

inline void require_barrier_domain(const PotentialKind& kind, double mu) {
    if (mu <= 0.0 || mu >= kind.r)
        throw BarrierDomainError("barrier potential outside domain 0 < mu < r (mu = " +
                                 std::to_string(mu) + ", r = " + std::to_string(kind.r) + ")");
}

// ln(c_ij * mu_ij) with c_ij = r - mu_ij.
inline double log_cmu(const PotentialKind& kind, double mu) {
    return std::log((kind.r - mu) * mu);
}

}  // namespace detail

// Per-edge potential contribution. Quadratic: e^2/2. Barrier:
// e^2/2 * [(ln(c*mu))^2 + 1]. The per-agent P_i is the sum over neighbors.
inline double potential_value(const PotentialKind& kind, const EdgeState& edge) {
    if (kind.is_barrier()) {
        detail::require_barrier_domain(kind, edge.mu);
        const double l = detail::log_cmu(kind, edge.mu);
        return 0.5 * edge.e * edge.e * (l * l + 1.0);
    }
    return 0.5 * edge.e * edge.e;
}

// dP/de holding mu's direct barrier appearance fixed.
inline double dP_de(const PotentialKind& kind, const EdgeState& edge) {
    if (kind.is_barrier()) {
        detail::require_barrier_domain(kind, edge.mu);
        const double l = detail::log_cmu(kind, edge.mu);
        return edge.e * (l * l + 1.0);
    }
    return edge.e;
}

// Total derivative dP/dmu at fixed s_ij (e depends on mu with de/dmu = 1).
// Quadratic: e. Barrier: e*[(ln(c mu))^2 + 1] + e^2 ln(c mu) (r - 2 mu)/(c mu).
inline double dP_dmu_total(const PotentialKind& kind, const EdgeState& edge) {
    if (kind.is_barrier()) {
        detail::require_barrier_domain(kind, edge.mu);
        const double c = kind.r - edge.mu;
        const double l = std::log(c * edge.mu);
        return edge.e * (l * l + 1.0) +
               edge.e * edge.e * l * (kind.r - 2.0 * edge.mu) / (c * edge.mu);
    }
    return edge.e;
}

// dP_i/dX_i = -sum_j dP_dmu_total(edge_ij) * o_mu_ij. For the quadratic
// potential this reduces exactly to -sum_j (dP/de_ij) o_mu_ij.
struct NeighborEdge {
    EdgeState edge;
    EdgeGeometry geom;
};

inline Vec2 grad_wrt_gradient(std::span<const NeighborEdge> neighbors,
                              const PotentialKind& kind) {
    Vec2 g{0.0, 0.0};
    for (const auto& nb : neighbors) g += (-dP_dmu_total(kind, nb.edge)) * nb.geom.o_mu;
    return g;
}

}  // namespace flexflock
