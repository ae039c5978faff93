#include "dfl/reputation.hpp"

#include <array>
#include <cmath>

namespace dfl {

namespace {

std::array<double, 4> as_array(const MetricVector& m) {
    return {m.similarity, m.fraction, m.latency, m.messages};
}

}  // namespace

WeightVector dynamic_weights(const MetricVector& current, const MetricVector& reference_means,
                             double floor, Substream& rng) {
    const auto cur = as_array(current);
    const auto ref = as_array(reference_means);
    std::array<double, 4> w{};
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        w[i] = std::abs(cur[i] - ref[i]);
        total += w[i];
    }
    if (total <= 0.0) {
        // zero deviation everywhere: random normalized weights avoid stagnation
        total = 0.0;
        for (auto& v : w) {
            v = rng.uniform01() + 1e-12;
            total += v;
        }
    }
    for (auto& v : w) v /= total;

    // raise sub-floor entries to the floor, rescale the rest; repeat until stable
    if (floor > 0.0) {
        std::array<bool, 4> at_floor{};
        for (;;) {
            bool changed = false;
            double floored_mass = 0.0;
            double free_mass = 0.0;
            for (int i = 0; i < 4; ++i) {
                if (!at_floor[i] && w[i] < floor) {
                    at_floor[i] = true;
                    changed = true;
                }
                if (at_floor[i])
                    floored_mass += floor;
                else
                    free_mass += w[i];
            }
            if (!changed) break;
            const double scale = free_mass > 0.0 ? (1.0 - floored_mass) / free_mass : 0.0;
            for (int i = 0; i < 4; ++i) w[i] = at_floor[i] ? floor : w[i] * scale;
        }
    }
    return {w[0], w[1], w[2], w[3]};
}

double intermediate_score(const MetricVector& metrics, const WeightVector& weights) {
    const double s = weights.similarity * metrics.similarity + weights.fraction * metrics.fraction +
                     weights.latency * metrics.latency + weights.messages * metrics.messages;
    return clamp01(s);
}

double update_reputation(std::span<const double> history, double score, const HistoryWeights& hw) {
    const std::size_t k = std::min(history.size(), hw.window);
    if (k == 0) return clamp01(score);
    // ages 1..k over the newest k entries, weight ~ decay^age
    double wsum = 0.0;
    std::vector<double> w(k);
    for (std::size_t age = 1; age <= k; ++age) {
        w[age - 1] = std::pow(hw.decay, static_cast<double>(age));
        wsum += w[age - 1];
    }
    const double past_total = 1.0 - hw.omega_current;
    double r = hw.omega_current * score;
    for (std::size_t age = 1; age <= k; ++age) {
        const double value = history[history.size() - age];
        r += past_total * (w[age - 1] / wsum) * value;
    }
    return clamp01(r);
}

double fuse_feedback(double local, std::span<const double> feedback, double eta) {
    if (feedback.empty()) return clamp01(local);
    double mean = 0.0;
    for (double v : feedback) mean += v;
    mean /= static_cast<double>(feedback.size());
    return clamp01(eta * local + (1.0 - eta) * mean);
}

MetricVector reference_means(const NeighborRecord& rec, int round, const MetricVector& current) {
    if (rec.metric_history.empty()) return current;
    if (round < 2) return rec.metric_history.front();
    MetricVector mu{0.0, 0.0, 0.0, 0.0};
    for (const auto& m : rec.metric_history) {
        mu.similarity += m.similarity;
        mu.fraction += m.fraction;
        mu.latency += m.latency;
        mu.messages += m.messages;
    }
    const double n = static_cast<double>(rec.metric_history.size());
    mu.similarity /= n;
    mu.fraction /= n;
    mu.latency /= n;
    mu.messages /= n;
    return mu;
}

}  // namespace dfl
