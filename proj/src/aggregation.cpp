#include "dfl/aggregation.hpp"

#include "dfl/errors.hpp"

namespace dfl {

std::vector<std::pair<ModelMessage, double>> filter_models(
    std::span<const ModelMessage> messages, const std::map<NodeId, double>& reputations,
    const AggregationPolicy& policy, double default_reputation) {
    std::vector<std::pair<ModelMessage, double>> kept;
    kept.reserve(messages.size());
    for (const auto& msg : messages) {
        const auto it = reputations.find(msg.sender);
        const double rep = it != reputations.end() ? it->second : default_reputation;
        if (rep >= policy.exclusion_threshold) kept.emplace_back(msg, rep);
    }
    return kept;
}

ModelVector reputation_weighted_aggregate(const ModelVector& local,
                                          std::span<const std::pair<ModelVector, double>> accepted,
                                          const AggregationPolicy& policy) {
    if (accepted.empty()) return local;
    ModelVector sum = ModelVector::Zero(local.size());
    double total = 0.0;
    if (policy.include_self) {
        sum = local;
        total = 1.0;
    }
    for (const auto& [params, weight] : accepted) {
        if (params.size() != local.size())
            throw DimensionError("reputation_weighted_aggregate: dimension mismatch");
        sum += weight * params;
        total += weight;
    }
    if (total <= 0.0) return local;
    return sum / total;
}

}  // namespace dfl
