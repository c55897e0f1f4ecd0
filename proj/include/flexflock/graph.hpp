// Communication topology: static adjacency or dynamic range-limited
// neighbor sets computed in gradient space, edge lifecycle at switching
// times, and connectivity queries.
#pragma once

#include <set>
#include <span>
#include <vector>

#include "flexflock/core.hpp"

namespace flexflock {

// Canonical undirected edge key, i < j.
struct EdgeKey {
    int i = 0;
    int j = 0;

    EdgeKey() = default;
    EdgeKey(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {
        if (a == b) throw InvalidArgument("self-loop edge");
    }
    auto operator<=>(const EdgeKey&) const = default;
};

enum class TopologyMode { Static, Dynamic };

enum class EdgeEventKind { Added, RemovedViolation };

struct EdgeEvent {
    double time = 0.0;
    EdgeKey edge;
    EdgeEventKind kind = EdgeEventKind::Added;
};

// Undirected graph over agents 0..n-1. Static mode: fixed edge set from the
// scenario. Dynamic mode: edges admitted while mu_ij < r, checked at step
// boundaries.
struct Topology {
    TopologyMode mode = TopologyMode::Static;
    int n_agents = 0;
    std::set<EdgeKey> edges;
    double r = 0.0;  // Dynamic mode sensing range, gradient-space units

    bool has_edge(int a, int b) const { return a != b && edges.count(EdgeKey(a, b)) > 0; }
};

// mu_ij = ||X_j - X_i||, the gradient difference of a pair of agents.
inline double mu(Vec2 Xi, Vec2 Xj) { return (Xj - Xi).norm(); }

// Neighbor set of agent i. Static: the adjacency row. Dynamic: all j with
// r - mu_ij > 0 (strict; mu_ij = r exactly is not a neighbor).
inline std::vector<int> neighbor_set(int i, std::span<const Vec2> gradients,
                                     const Topology& topo) {
    if (i < 0 || i >= topo.n_agents) throw InvalidArgument("agent id out of range");
    if (static_cast<int>(gradients.size()) != topo.n_agents)
        throw InvalidArgument("gradient count does not match agent count");
    std::vector<int> out;
    for (int j = 0; j < topo.n_agents; ++j) {
        if (j == i) continue;
        const bool in = topo.mode == TopologyMode::Static
                            ? topo.has_edge(i, j)
                            : (topo.r - mu(gradients[i], gradients[j]) > 0.0);
        if (in) out.push_back(j);
    }
    return out;
}

// Recompute the dynamic edge set from current gradients. New in-range pairs
// are Added; stored edges with mu_ij >= r are removed and flagged as
// RemovedViolation (under the barrier potential with lambda within the
// connectivity-preservation bound this must never happen, so a removal is a
// violation diagnostic rather than normal operation).
inline std::vector<EdgeEvent> update_edges(Topology& topo, std::span<const Vec2> gradients,
                                           double t) {
    if (topo.mode != TopologyMode::Dynamic)
        throw InvalidArgument("update_edges requires a dynamic topology");
    if (static_cast<int>(gradients.size()) != topo.n_agents)
        throw InvalidArgument("gradient count does not match agent count");
    std::vector<EdgeEvent> events;
    for (int i = 0; i < topo.n_agents; ++i) {
        for (int j = i + 1; j < topo.n_agents; ++j) {
            const EdgeKey key(i, j);
            const bool in_range = topo.r - mu(gradients[i], gradients[j]) > 0.0;
            const bool present = topo.edges.count(key) > 0;
            if (in_range && !present) {
                topo.edges.insert(key);
                events.push_back({t, key, EdgeEventKind::Added});
            } else if (!in_range && present) {
                topo.edges.erase(key);
                events.push_back({t, key, EdgeEventKind::RemovedViolation});
            }
        }
    }
    return events;
}

// Breadth-first reachability from agent 0; a single agent is connected.
inline bool is_connected(const Topology& topo) {
    if (topo.n_agents <= 1) return true;
    std::vector<char> seen(topo.n_agents, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < topo.n_agents; ++v) {
            if (!seen[v] && topo.has_edge(u, v)) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == topo.n_agents;
}

}  // namespace flexflock
