#include "dfl/attack.hpp"

#include <algorithm>
#include <cmath>

namespace dfl {

bool attack_active(const AttackConfig& cfg, int round) {
    if (cfg.kind == AttackKind::none) return false;
    if (round < cfg.start_round) return false;
    if (cfg.end_round >= 0 && round > cfg.end_round) return false;
    return (round - cfg.start_round) % std::max(cfg.interval, 1) == 0;
}

std::vector<NodeId> select_attackers(int n, double fraction, Substream& rng) {
    const int count = static_cast<int>(std::lround(static_cast<double>(n) * fraction));
    auto picked = rng.sample_without_replacement(n, count);
    std::sort(picked.begin(), picked.end());
    return picked;
}

ModelVector apply_poisoning(const ModelVector& model, double sigma, Substream& rng) {
    ModelVector out = model;
    if (sigma <= 0.0) return out;
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += rng.normal(0.0, sigma);
    return out;
}

}  // namespace dfl
