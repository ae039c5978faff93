#include <doctest.h>

#include <string>

#include "dfl/config.hpp"
#include "dfl/errors.hpp"

using namespace dfl;

TEST_SUITE("config") {

TEST_CASE("minimal config fills documented defaults") {
    const auto cfg = parse_config(R"({"name": "base", "seed": 42})");
    CHECK(cfg.name == "base");
    CHECK(cfg.seed == 42);
    CHECK(cfg.rounds == 20);
    CHECK(cfg.n_nodes == 10);
    CHECK(cfg.timeout_s == doctest::Approx(30.0));
    CHECK(cfg.reputation.threshold == doctest::Approx(0.6));
    CHECK(cfg.reputation.initial == doctest::Approx(0.6));
    CHECK(cfg.reputation.eta == doctest::Approx(0.8));
    CHECK(cfg.topology.kind == TopologyKind::fully);
    CHECK(cfg.dirichlet_alpha == doctest::Approx(0.5));
}

TEST_CASE("range violations name the offending key") {
    try {
        parse_config(R"({"name": "x", "seed": 1, "attack": {"attacker_fraction": 1.5}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("attack.attacker_fraction") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        parse_config(R"({"name": "x", "seed": 1, "reputation": {"tresholdd": 0.5}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("reputation.tresholdd") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"name": "x", "seed": 1, "bogus": 3})"), ConfigError);
}

TEST_CASE("missing required fields fail") {
    CHECK_THROWS_AS(parse_config(R"({"seed": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"name": "x"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("parse -> serialize -> parse round-trips") {
    const std::string text = R"({
        "name": "rt", "seed": 7, "n_nodes": 12, "rounds": 9, "timeout_s": 45.0,
        "topology": {"kind": "random", "edge_prob": 0.4},
        "dirichlet_alpha": 0.3,
        "attack": {"kind": "delayer", "attacker_fraction": 0.4, "start_round": 3,
                   "interval": 2, "end_round": 8, "delay_s": 35.5},
        "reputation": {"eta": 0.25, "weight_floor": 0.1,
                       "flow": {"extra_penalty": 0.75, "smoothing": [0.5, 0.4, 0.1]}},
        "trainer": {"dim_in": 5, "classes": 3, "samples_per_node": 50},
        "network": {"base_messages": 4}
    })";
    const auto cfg = parse_config(text);
    const auto again = parse_config(serialize_config(cfg));
    CHECK(serialize_config(cfg) == serialize_config(again));
    CHECK(again.attack.kind == AttackKind::delayer);
    CHECK(again.attack.delay_s == doctest::Approx(35.5));
    CHECK(again.reputation.flow.extra_penalty == doctest::Approx(0.75));
    CHECK(again.network.base_messages == 4);
    CHECK(again.topology.kind == TopologyKind::random);
}

TEST_CASE("gamma must be a 4-entry simplex") {
    CHECK_THROWS_AS(
        parse_config(R"({"name":"x","seed":1,"reputation":{"gamma":[0.5,0.5]}})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"name":"x","seed":1,"reputation":{"gamma":[0.5,0.5,0.5,0.5]}})"),
        ConfigError);
    const auto cfg =
        parse_config(R"({"name":"x","seed":1,"reputation":{"gamma":[1.0,0.0,0.0,0.0]}})");
    CHECK(cfg.reputation.gamma.cosine == doctest::Approx(1.0));
}

}  // TEST_SUITE
