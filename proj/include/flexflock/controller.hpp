// The distributed flexible flocking control law. Each agent's (v, omega)
// is a function of its own pose, its own field Hessian, and its neighbors'
// gradient samples only — no neighbor pose, velocity, or orientation enters
// anywhere in this header's signatures.
#pragma once

#include <cmath>
#include <span>
#include <utility>

#include "flexflock/bus.hpp"
#include "flexflock/core.hpp"
#include "flexflock/potential.hpp"

namespace flexflock {

struct ControlInput {
    double v = 0.0;      // forward velocity
    double omega = 0.0;  // angular velocity, rad/time
};

struct ControllerConfig {
    double K_f = 1.0;  // control gain, > 0
    PotentialKind potential = PotentialKind::quadratic();
};

// o = (cos t, sin t), o_perp = (sin t, -cos t); an orthonormal pair.
inline std::pair<Vec2, Vec2> orientation_vectors(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {{c, s}, {s, -c}};
}

// v = -(K_f/N) o . hess . gradP^T, omega = +(K_f/N) o_perp . hess . gradP^T.
// An isolated agent (n_neighbors = 0) holds still.
inline ControlInput compute_control(const AgentState& pose, const Mat2& hess, Vec2 gradP,
                                    int n_neighbors, const ControllerConfig& cfg) {
    if (!std::isfinite(pose.theta) || !hess.finite() || !gradP.finite())
        throw InvalidArgument("non-finite controller input");
    if (n_neighbors <= 0) return {0.0, 0.0};
    const auto [o, o_perp] = orientation_vectors(pose.theta);
    const Vec2 hg = hess * gradP;
    const double gain = cfg.K_f / static_cast<double>(n_neighbors);
    return {-gain * o.dot(hg), gain * o_perp.dot(hg)};
}

// Everything one agent knows about one neighbor: the received gradient
// sample and the shared per-edge spacing state.
struct NeighborInput {
    GradientSample sample;
    EdgeState edge;
};

// Full per-agent control pipeline: edge directions from gradient samples,
// potential derivative per edge, dP_i/dX_i, then the control law.
inline ControlInput agent_step_inputs(const AgentState& pose, Vec2 own_gradient,
                                      const Mat2& own_hessian,
                                      std::span<const NeighborInput> neighbors,
                                      const ControllerConfig& cfg) {
    if (neighbors.empty()) return {0.0, 0.0};
    Vec2 gradP{0.0, 0.0};
    for (const auto& nb : neighbors) {
        const EdgeGeometry geom = edge_direction(own_gradient, nb.sample.X);
        gradP += (-dP_dmu_total(cfg.potential, nb.edge)) * geom.o_mu;
    }
    return compute_control(pose, own_hessian, gradP, static_cast<int>(neighbors.size()), cfg);
}

}  // namespace flexflock
