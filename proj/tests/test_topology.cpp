#include <doctest.h>

#include "dfl/errors.hpp"
#include "dfl/topology.hpp"

using namespace dfl;

TEST_SUITE("topology") {

TEST_CASE("fully connected graph has degree n-1") {
    RngStream rng(1);
    auto s = rng.stream("topo");
    const auto adj = build_topology({TopologyKind::fully, 10, 0.3}, s);
    for (NodeId v = 0; v < 10; ++v) CHECK(adj.degree(v) == 9);
    CHECK(is_connected(adj));
}

TEST_CASE("ring has degree 2") {
    RngStream rng(1);
    auto s = rng.stream("topo");
    const auto adj = build_topology({TopologyKind::ring, 10, 0.3}, s);
    for (NodeId v = 0; v < 10; ++v) CHECK(adj.degree(v) == 2);
    CHECK(is_connected(adj));
    CHECK(adj.has_edge(0, 9));
    CHECK(adj.has_edge(0, 1));
    CHECK_FALSE(adj.has_edge(0, 2));
}

TEST_CASE("two-node ring collapses to a single edge") {
    RngStream rng(1);
    auto s = rng.stream("topo");
    const auto adj = build_topology({TopologyKind::ring, 2, 0.3}, s);
    CHECK(adj.degree(0) == 1);
    CHECK(adj.degree(1) == 1);
}

TEST_CASE("random graphs are connected and seed-deterministic") {
    RngStream rng(17);
    auto s1 = rng.stream("topo");
    auto s2 = rng.stream("topo");
    const auto a = build_topology({TopologyKind::random, 10, 0.3}, s1);
    const auto b = build_topology({TopologyKind::random, 10, 0.3}, s2);
    CHECK(is_connected(a));
    CHECK(a.neighbors == b.neighbors);
    // symmetry, no self loops
    for (NodeId v = 0; v < 10; ++v) {
        for (NodeId u : a.neighbors[static_cast<std::size_t>(v)]) {
            CHECK(u != v);
            CHECK(a.has_edge(u, v));
        }
    }
}

TEST_CASE("sparse random graphs get regenerated until connected") {
    RngStream rng(3);
    auto s = rng.stream("topo");
    const auto adj = build_topology({TopologyKind::random, 12, 0.12}, s);
    CHECK(is_connected(adj));
}

TEST_CASE("fewer than two nodes is a config error") {
    RngStream rng(1);
    auto s = rng.stream("topo");
    CHECK_THROWS_AS(build_topology({TopologyKind::fully, 1, 0.3}, s), ConfigError);
}

}  // TEST_SUITE
