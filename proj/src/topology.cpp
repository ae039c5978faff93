#include "dfl/topology.hpp"

#include <algorithm>
#include <queue>

#include "dfl/errors.hpp"

namespace dfl {

bool Adjacency::has_edge(NodeId a, NodeId b) const {
    const auto& nb = neighbors[static_cast<std::size_t>(a)];
    return std::find(nb.begin(), nb.end(), b) != nb.end();
}

bool is_connected(const Adjacency& adj) {
    if (adj.n == 0) return false;
    std::vector<bool> seen(static_cast<std::size_t>(adj.n), false);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = true;
    int visited = 1;
    while (!q.empty()) {
        const NodeId v = q.front();
        q.pop();
        for (NodeId u : adj.neighbors[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = true;
                ++visited;
                q.push(u);
            }
        }
    }
    return visited == adj.n;
}

Adjacency build_topology(const Topology& cfg, Substream& rng) {
    if (cfg.n < 2) throw ConfigError("topology.n: need at least 2 nodes");
    Adjacency adj;
    adj.n = cfg.n;
    adj.neighbors.assign(static_cast<std::size_t>(cfg.n), {});

    auto add_edge = [&](NodeId a, NodeId b) {
        adj.neighbors[static_cast<std::size_t>(a)].push_back(b);
        adj.neighbors[static_cast<std::size_t>(b)].push_back(a);
    };

    switch (cfg.kind) {
        case TopologyKind::fully:
            for (NodeId a = 0; a < cfg.n; ++a)
                for (NodeId b = a + 1; b < cfg.n; ++b) add_edge(a, b);
            break;
        case TopologyKind::ring:
            for (NodeId a = 0; a < cfg.n; ++a) add_edge(a, (a + 1) % cfg.n);
            if (cfg.n == 2) adj.neighbors = {{1}, {0}};  // avoid the doubled 0-1 edge
            break;
        case TopologyKind::random: {
            constexpr int kMaxTries = 10000;
            for (int attempt = 0; attempt < kMaxTries; ++attempt) {
                for (auto& nb : adj.neighbors) nb.clear();
                for (NodeId a = 0; a < cfg.n; ++a)
                    for (NodeId b = a + 1; b < cfg.n; ++b)
                        if (rng.uniform01() < cfg.edge_prob) add_edge(a, b);
                if (is_connected(adj)) break;
                if (attempt == kMaxTries - 1)
                    throw ConfigError("topology: could not sample a connected random graph");
            }
            break;
        }
    }
    for (auto& nb : adj.neighbors) std::sort(nb.begin(), nb.end());
    return adj;
}

}  // namespace dfl
