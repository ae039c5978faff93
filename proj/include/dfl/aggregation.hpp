#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dfl/core.hpp"

namespace dfl {

struct AggregationPolicy {
    double exclusion_threshold = 0.6;
    bool include_self = true;  // local model always contributes with weight 1.0
};

/// Drops messages whose sender reputation is below the threshold (boundary
/// accepts); survivors carry their sender's reputation as weight. Senders
/// missing from the map fall back to `default_reputation`.
std::vector<std::pair<ModelMessage, double>> filter_models(
    std::span<const ModelMessage> messages, const std::map<NodeId, double>& reputations,
    const AggregationPolicy& policy, double default_reputation = 0.6);

/// Weighted mean of the accepted models and (optionally) the local one.
/// Empty input returns the local model unchanged.
ModelVector reputation_weighted_aggregate(
    const ModelVector& local, std::span<const std::pair<ModelVector, double>> accepted,
    const AggregationPolicy& policy);

}  // namespace dfl
