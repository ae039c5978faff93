#pragma once

#include <map>
#include <span>
#include <vector>

#include "dfl/core.hpp"
#include "dfl/metrics.hpp"
#include "dfl/rng.hpp"

namespace dfl {

/// Per-metric weights used to collapse a MetricVector into a score.
struct WeightVector {
    double similarity = 0.25;
    double fraction = 0.25;
    double latency = 0.25;
    double messages = 0.25;

    double sum() const { return similarity + fraction + latency + messages; }
};

/// Deviation-proportional weights. All-zero deviations fall back to random
/// normalized weights drawn from `rng`; every component is then raised to
/// `floor` (the rest rescaled) so no metric is ever ignored.
WeightVector dynamic_weights(const MetricVector& current, const MetricVector& reference_means,
                             double floor, Substream& rng);

/// Weighted sum of the metrics; convex, so the result stays in [0,1].
double intermediate_score(const MetricVector& metrics, const WeightVector& weights);

/// How the reputation update balances history against the current score.
/// Past weights decay exponentially with age and are renormalized so that
/// omega_current plus the past weights sum to 1.
struct HistoryWeights {
    double omega_current = 0.4;
    double decay = 0.5;
    std::size_t window = 5;
};

/// history holds past reputations oldest-first; empty history returns score.
double update_reputation(std::span<const double> history, double score,
                         const HistoryWeights& hw = {});

/// Convex blend of the local estimate with the mean of received feedback.
/// Empty feedback leaves the local value unchanged.
double fuse_feedback(double local, std::span<const double> feedback, double eta);

constexpr double kDefaultInitialReputation = 0.6;

inline double initial_reputation(double configured = kDefaultInitialReputation) {
    return configured;
}

/// Everything one node remembers about one neighbor.
struct NeighborRecord {
    FractionHistory fraction;
    LatencyHistory latency;
    FlowHistory flow;

    std::vector<MetricVector> metric_history;   // one entry per evaluated round
    std::vector<WeightVector> weight_history;
    std::vector<double> score_history;
    std::vector<double> reputation_history;     // fused values, seeded with the initial

    ModelVector last_model;      // most recent model received (by model round)
    int last_model_round = -1;
    double last_similarity = 1.0;  // carried when no model arrives
};

/// A node's view of all of its neighbors. Owned and mutated by exactly one
/// node's round loop.
struct ReputationState {
    std::map<NodeId, NeighborRecord> neighbors;
};

/// Reference means for dynamic_weights: before round 2 the round-0
/// observation, afterwards the mean over all completed rounds. With no
/// history yet, the current observation itself (zero deviation everywhere).
MetricVector reference_means(const NeighborRecord& rec, int round, const MetricVector& current);

}  // namespace dfl
