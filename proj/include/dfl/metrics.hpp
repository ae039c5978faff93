#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dfl/core.hpp"

namespace dfl {

// --- fraction of parameters changed -----------------------------------------

/// Per-neighbor history of change fractions and the thresholds they were
/// counted against, plus the smoothing state.
struct FractionHistory {
    std::vector<double> f_values;  // change fractions, oldest first
    std::vector<double> t_values;  // matching thresholds
    double prev_final = 1.0;       // last smoothed score
    double lambda = 0.7;           // sensitivity to the current round
};

/// Anomaly score for the (fraction, threshold) pair of the current round.
/// Empty history is treated as non-anomalous (nothing to compare against).
double fraction_changed_score(const FractionHistory& hist, double f_current, double t_current);

/// True when both values fall under their limits. Flagged samples must not
/// enter the history, otherwise sustained attacks inflate their own reference.
bool fraction_within_limits(const FractionHistory& hist, double f_current, double t_current);

/// Gross outliers (beyond `factor` times the limit) are adversarial-scale and
/// stay out of the reference statistics; milder exceedances are legitimate
/// drift (e.g. re-convergence after an attack round) and must be absorbed.
bool fraction_gross_outlier(const FractionHistory& hist, double f_current, double t_current,
                            double factor = 2.0);

/// Penalty applied when a neighbor sent no model this round.
inline double missing_model_penalty(double prev_score) {
    return prev_score * 0.5;
}

// --- model arrival latency ---------------------------------------------------

struct LatencyHistory {
    std::vector<double> samples;     // past latencies in seconds, oldest first
    std::size_t round0_count = 0;    // leading samples that belong to round 0
    double prev_smoothed = 1.0;      // last smoothed score
    double mu_smooth = 0.7;          // weight of the current raw score
    double tau = 0.0;                // temporal tolerance; 0 = max(1, mean latency)
    double delta = 0.05;             // bootstrap penalty
    std::size_t bootstrap_rounds = 2;
};

/// Latency score. Within 150% of the reference mean the raw score is 1.0,
/// beyond it a sigmoid of the deviation. When `freeze_baseline_round0` is set
/// the reference mean uses only round-0 samples (attack-from-round-1 regime).
double latency_score(const LatencyHistory& hist, double latency_now,
                     bool freeze_baseline_round0 = false);

/// Same contamination rule as the fraction history: arrivals beyond `factor`
/// times the tolerance stay out of the reference mean.
bool latency_gross_outlier(const LatencyHistory& hist, double latency_now,
                           bool freeze_baseline_round0 = false, double factor = 2.0);

// --- incoming message flow ---------------------------------------------------

struct FlowConfig {
    double epsilon = 1e-6;
    double extra_penalty = 0.5;
    int recurrence_window = 3;
    double recurrence_threshold = 0.5;
    double recurrence_factor = 0.8;
    double floor_base = 0.05;
    std::array<double, 3> smooth_weights{0.6, 0.3, 0.1};  // newest first
};

/// Reference statistics over all pair counts of the previous round.
struct FlowStats {
    double p25 = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

FlowStats flow_stats(const std::vector<double>& prev_round_counts);

struct FlowHistory {
    std::vector<double> past_scores;  // this pair's final scores, oldest first
    FlowConfig cfg;
};

/// Flow anomaly score for one pair given the previous round's reference stats.
double message_flow_score(const FlowHistory& hist, double pair_count, const FlowStats& prev);

}  // namespace dfl
