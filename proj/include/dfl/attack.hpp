#pragma once

#include <vector>

#include "dfl/core.hpp"
#include "dfl/rng.hpp"

namespace dfl {

enum class AttackKind { none, poisoning, delayer, flooding };

struct AttackConfig {
    AttackKind kind = AttackKind::none;
    double attacker_fraction = 0.3;
    int start_round = 7;
    int interval = 1;    // 1 = every round
    int end_round = -1;  // inclusive; -1 = until the run ends
    double poison_sigma = 3.0;   // per-coordinate noise scale
    double delay_s = 20.0;       // delayer
    int flood_multiplier = 10;   // flooding
};

/// Activation gate: round >= start, not past end, and on the interval grid.
bool attack_active(const AttackConfig& cfg, int round);

/// Exactly round(n * fraction) distinct nodes from the attack substream.
std::vector<NodeId> select_attackers(int n, double fraction, Substream& rng);

/// Additive Gaussian noise on every coordinate.
ModelVector apply_poisoning(const ModelVector& model, double sigma, Substream& rng);

/// Delayed effective dispatch time.
inline double apply_delay(double send_time, double delay_s) {
    return send_time + delay_s;
}

/// Total protocol messages an attacker emits per neighbor while flooding.
inline int apply_flooding(int base_messages, int multiplier) {
    return base_messages * multiplier;
}

}  // namespace dfl
