#pragma once

#include <vector>

#include "dfl/core.hpp"
#include "dfl/rng.hpp"

namespace dfl {

enum class TopologyKind { fully, ring, random };

struct Topology {
    TopologyKind kind = TopologyKind::fully;
    int n = 10;
    double edge_prob = 0.3;  // random kind only
};

/// Symmetric, loop-free adjacency with sorted neighbor lists.
struct Adjacency {
    int n = 0;
    std::vector<std::vector<NodeId>> neighbors;

    bool has_edge(NodeId a, NodeId b) const;
    int degree(NodeId v) const { return static_cast<int>(neighbors[v].size()); }
};

bool is_connected(const Adjacency& adj);

/// fully -> complete graph, ring -> cycle, random -> Erdos-Renyi resampled
/// until connected. Throws ConfigError for n < 2.
Adjacency build_topology(const Topology& cfg, Substream& rng);

}  // namespace dfl
