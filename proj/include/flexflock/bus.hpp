// Synchronous gradient-message exchange over the communication topology.
// The only inter-agent message is a GradientSample; delivering exactly the
// neighbor set's samples is what makes the "only field gradients are
// exchanged" property structural rather than aspirational.
#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "flexflock/core.hpp"
#include "flexflock/graph.hpp"

namespace flexflock {

// The single message type. X is the sender's field gradient in the common
// NE frame (frame conversion is the identity under the shared-orientation
// assumption; the stamp ties the sample to the step that produced it).
struct GradientSample {
    int sender = 0;
    Vec2 X;
    long stamp = 0;
};

// mailbox[i] holds exactly the samples of i's neighbors, sorted by sender.
using Mailbox = std::vector<std::vector<GradientSample>>;

inline Mailbox publish_all(const Topology& topo, std::span<const Vec2> gradients,
                           long step) {
    if (static_cast<int>(gradients.size()) != topo.n_agents)
        throw InvalidArgument("one gradient per agent required");
    Mailbox mail(topo.n_agents);
    for (const auto& key : topo.edges) {
        mail[key.i].push_back({key.j, gradients[key.j], step});
        mail[key.j].push_back({key.i, gradients[key.i], step});
    }
    for (auto& box : mail)
        std::sort(box.begin(), box.end(),
                  [](const GradientSample& a, const GradientSample& b) {
                      return a.sender < b.sender;
                  });
    return mail;
}

}  // namespace flexflock
