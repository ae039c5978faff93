#include <doctest.h>

#include "dfl/metrics.hpp"

using namespace dfl;

TEST_SUITE("metrics") {

TEST_CASE("fraction score is perfect when nothing deviates") {
    FractionHistory h;
    h.f_values = {0.2, 0.2, 0.2};
    h.t_values = {0.1, 0.1, 0.1};
    h.lambda = 1.0;
    h.prev_final = 1.0;
    CHECK(fraction_changed_score(h, 0.2, 0.1) == doctest::Approx(1.0));
}

TEST_CASE("fraction score penalizes an anomalous fraction") {
    FractionHistory h;
    h.f_values = {0.2, 0.2};  // mu 0.2, sd 0
    h.t_values = {0.1, 0.1};
    h.lambda = 1.0;
    h.prev_final = 1.0;
    CHECK(fraction_changed_score(h, 0.4, 0.1) == doctest::Approx(0.6344707106849976));
}

TEST_CASE("fraction smoothing blends with the previous final") {
    FractionHistory h;
    h.f_values = {0.2, 0.2};
    h.t_values = {0.1, 0.1};
    h.lambda = 0.5;
    h.prev_final = 1.0;
    CHECK(fraction_changed_score(h, 0.4, 0.1) == doctest::Approx(0.8172353553424988));
}

TEST_CASE("fraction bootstrap with empty history is neutral") {
    FractionHistory h;
    h.lambda = 1.0;
    CHECK(fraction_changed_score(h, 0.9, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("missing model penalty halves exactly") {
    CHECK(missing_model_penalty(1.0) == 0.5);
    CHECK(missing_model_penalty(0.0) == 0.0);
    CHECK(missing_model_penalty(missing_model_penalty(0.5)) == 0.125);
    CHECK(missing_model_penalty(0.7) == 0.5 * 0.7);  // bit-exact halving
}

TEST_CASE("latency within the 150% threshold is perfect") {
    LatencyHistory h;
    h.samples = {10.0, 10.0, 10.0};
    h.mu_smooth = 1.0;
    CHECK(latency_score(h, 10.0) == doctest::Approx(1.0));
    CHECK(latency_score(h, 14.9) == doctest::Approx(1.0));
}

TEST_CASE("latency beyond the threshold follows the sigmoid") {
    LatencyHistory h;
    h.samples = {10.0, 10.0, 10.0};
    h.mu_smooth = 1.0;
    h.tau = 10.0;
    CHECK(latency_score(h, 30.0) == doctest::Approx(0.11920292202211755));
}

TEST_CASE("latency bootstrap applies the delta discount") {
    LatencyHistory h;  // one sample -> below the 2-round bootstrap window
    h.samples = {1.0};
    h.delta = 0.05;
    CHECK(latency_score(h, 1.0) == doctest::Approx(0.95));
    LatencyHistory empty;
    CHECK(latency_score(empty, 3.0) == doctest::Approx(0.95));
}

TEST_CASE("latency smoothing is a convex blend") {
    LatencyHistory h;
    h.samples = {1.0, 1.0, 1.0};
    h.mu_smooth = 0.7;
    h.prev_smoothed = 0.4;
    // raw 1.0 within threshold
    CHECK(latency_score(h, 1.0) == doctest::Approx(0.7 * 1.0 + 0.3 * 0.4));
}

TEST_CASE("frozen baseline uses only round-0 samples") {
    LatencyHistory h;
    h.samples = {1.0, 50.0, 50.0, 50.0};  // later samples are contaminated
    h.round0_count = 1;
    h.mu_smooth = 1.0;
    h.tau = 1.0;
    // with frozen baseline the mean stays 1.0 and 50 is way out
    CHECK(latency_score(h, 50.0, true) < 0.01);
    // un-frozen, the contaminated mean is ~37.75 and 50 is within 150%
    CHECK(latency_score(h, 50.0, false) == doctest::Approx(1.0));
}

TEST_CASE("flow score is perfect at or below the reference") {
    FlowHistory h;
    const auto prev = flow_stats({10, 10, 10, 10});
    CHECK(message_flow_score(h, 10.0, prev) == doctest::Approx(1.0));
    CHECK(message_flow_score(h, 3.0, prev) == doctest::Approx(1.0));  // clamped rel_incr
}

TEST_CASE("flow stats silent-network guard") {
    FlowHistory h;
    h.cfg.floor_base = 0.0;
    const auto prev = flow_stats({0, 0, 0, 0});
    // p25 replaced by 1; a count of 1 is at the reference -> margin covers it
    CHECK(message_flow_score(h, 1.0, prev) == doctest::Approx(1.0));
    CHECK(message_flow_score(h, 100.0, prev) < 0.05);
}

TEST_CASE("flow recurrence and floor") {
    FlowHistory h;
    h.past_scores = {0.1, 0.1, 0.1};
    const auto prev = flow_stats({3, 3, 3, 3});
    const double s = message_flow_score(h, 30.0, prev);
    // floor erodes with the low streak: 0.05 * (1 - 3/10) = 0.035 before blending
    const double blended_floor = (0.6 * 0.035 + 0.3 * 0.1 + 0.1 * 0.1) / 1.0;
    CHECK(s == doctest::Approx(blended_floor));
}

TEST_CASE("flow smoothing renormalizes for short histories") {
    FlowHistory h;
    h.past_scores = {0.5};
    h.cfg.floor_base = 0.0;
    const auto prev = flow_stats({10, 10, 10, 10});
    // raw 1.0, blended with one prior: (0.6*1 + 0.3*0.5) / 0.9
    CHECK(message_flow_score(h, 10.0, prev) == doctest::Approx((0.6 + 0.15) / 0.9));
}

}  // TEST_SUITE
