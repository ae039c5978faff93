#include "dfl/metrics.hpp"

#include <cmath>

namespace dfl {

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

double square(double x) {
    return x * x;
}

struct Limits {
    double mu = 0.0;
    double limit = 0.0;
};

Limits limits_of(const std::vector<double>& values, double slack) {
    const auto [mu, sd] = mean_std(values);
    return {mu, (mu + sd) * slack};
}

double reference_latency_mean(const LatencyHistory& hist, bool freeze_baseline_round0) {
    const std::size_t n = freeze_baseline_round0
                              ? std::min(hist.round0_count, hist.samples.size())
                              : hist.samples.size();
    if (n == 0) return -1.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += hist.samples[i];
    return mean / static_cast<double>(n);
}

}  // namespace

double fraction_changed_score(const FractionHistory& hist, double f_current, double t_current) {
    double s_f = 1.0;
    double s_t = 1.0;
    if (!hist.f_values.empty()) {
        const auto lf = limits_of(hist.f_values, 1.05);
        if (f_current > lf.limit)
            s_f = 1.0 - sigmoid(std::abs(f_current - lf.mu) / std::max(lf.mu, 1e-6));
    }
    if (!hist.t_values.empty()) {
        const auto lt = limits_of(hist.t_values, 1.10);
        if (t_current > lt.limit)
            s_t = 1.0 - sigmoid(std::abs(t_current - lt.mu) / std::max(lt.mu, 1e-6));
    }
    const double combined = 0.5 * s_f + 0.5 * s_t;
    return clamp01(hist.lambda * combined + (1.0 - hist.lambda) * hist.prev_final);
}

bool fraction_within_limits(const FractionHistory& hist, double f_current, double t_current) {
    if (hist.f_values.empty()) return true;
    const auto lf = limits_of(hist.f_values, 1.05);
    const auto lt = limits_of(hist.t_values, 1.10);
    return f_current <= lf.limit && t_current <= lt.limit;
}

bool fraction_gross_outlier(const FractionHistory& hist, double f_current, double t_current,
                            double factor) {
    if (hist.f_values.empty()) return false;
    const auto lf = limits_of(hist.f_values, 1.05);
    const auto lt = limits_of(hist.t_values, 1.10);
    return f_current > factor * std::max(lf.limit, 1e-12) ||
           t_current > factor * std::max(lt.limit, 1e-12);
}

double latency_score(const LatencyHistory& hist, double latency_now,
                     bool freeze_baseline_round0) {
    double raw = 1.0;
    const double mean = reference_latency_mean(hist, freeze_baseline_round0);
    if (mean >= 0.0 && latency_now > 1.5 * mean) {
        const double dt = latency_now - mean;
        const double tau = hist.tau > 0.0 ? hist.tau : std::max(1.0, mean);
        raw = 1.0 / (1.0 + std::exp(std::abs(dt) / tau));
    }
    if (hist.samples.size() < hist.bootstrap_rounds) return clamp01(raw * (1.0 - hist.delta));
    return clamp01(hist.mu_smooth * raw + (1.0 - hist.mu_smooth) * hist.prev_smoothed);
}

bool latency_gross_outlier(const LatencyHistory& hist, double latency_now,
                           bool freeze_baseline_round0, double factor) {
    const double mean = reference_latency_mean(hist, freeze_baseline_round0);
    return mean >= 0.0 && latency_now > factor * 1.5 * mean;
}

FlowStats flow_stats(const std::vector<double>& prev_round_counts) {
    FlowStats st;
    st.p25 = percentile(prev_round_counts, 0.25);
    const auto [mean, sd] = mean_std(prev_round_counts);
    st.mean = mean;
    st.stddev = sd;
    return st;
}

double message_flow_score(const FlowHistory& hist, double pair_count, const FlowStats& prev) {
    const FlowConfig& c = hist.cfg;
    const double p25 = std::max(prev.p25, 1.0);  // silent-network guard
    const double rel_incr = std::max((pair_count - p25) / p25, 0.0);
    const double margin = (prev.stddev + 1.0) / (std::log1p(p25) + 1.0);

    double s = 1.0;
    if (rel_incr > margin) {
        s *= std::exp(-square(std::log1p(rel_incr - margin) / (std::log1p(margin) + c.epsilon)));
        if (pair_count > prev.mean) {
            const double increase_mean = pair_count - prev.mean;
            const double amplification = 1.0 + increase_mean / (prev.mean + c.epsilon);
            s *= std::exp(-square(c.extra_penalty * amplification));
        }
    }

    const auto& past = hist.past_scores;
    const auto w = static_cast<std::size_t>(std::max(c.recurrence_window, 1));
    if (past.size() >= w) {
        bool all_low = true;
        for (std::size_t i = past.size() - w; i < past.size(); ++i)
            all_low = all_low && past[i] < c.recurrence_threshold;
        if (all_low) s *= c.recurrence_factor;
    }

    // floor erodes as the low streak grows, so persistent flooders sink
    std::size_t low_streak = 0;
    for (auto it = past.rbegin(); it != past.rend() && *it < c.recurrence_threshold; ++it)
        ++low_streak;
    const double f_min =
        c.floor_base * (1.0 - std::min(1.0, static_cast<double>(low_streak) / 10.0));
    s = std::max(s, f_min);

    // blend with up to two prior finals, newest first, weights renormalized
    double num = c.smooth_weights[0] * s;
    double den = c.smooth_weights[0];
    for (std::size_t i = 0; i < 2 && i < past.size(); ++i) {
        num += c.smooth_weights[i + 1] * past[past.size() - 1 - i];
        den += c.smooth_weights[i + 1];
    }
    return clamp01(num / den);
}

}  // namespace dfl
