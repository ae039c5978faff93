#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "dfl/aggregation.hpp"
#include "dfl/attack.hpp"
#include "dfl/metrics.hpp"
#include "dfl/reputation.hpp"
#include "dfl/similarity.hpp"
#include "dfl/topology.hpp"

namespace dfl {

struct ReputationConfig {
    bool enabled = true;
    double threshold = 0.6;
    double initial = 0.6;
    double eta = 0.8;
    double lambda = 0.7;
    double mu_smooth = 0.7;
    double tau = 0.0;  // 0 = adaptive: max(1, mean latency)
    double delta = 0.05;
    int bootstrap_rounds = 2;
    SimilarityWeights gamma;
    double weight_floor = 0.05;
    double omega_current = 0.9;
    double history_decay = 0.5;
    int history_window = 5;
    bool latency_baseline_round0 = false;
    double outlier_factor = 2.0;  // reference-contamination cutoff, in limit multiples
    FlowConfig flow;
};

struct TrainerConfig {
    int dim_in = 16;
    int classes = 10;
    int samples_per_node = 200;
    double lr = 0.2;
    int epochs = 1;
    double test_fraction = 0.2;
    double class_separation = 1.2;
    double noise = 1.0;
};

struct NetworkConfig {
    double base_latency_s = 1.0;
    double jitter_s = 0.5;
    int base_messages = 3;  // model + ack + reputation
};

/// Full experiment description. parse_config fills defaults, rejects unknown
/// keys and validates ranges; errors name the offending key path.
struct ScenarioConfig {
    int schema_version = 1;
    std::string name;
    std::uint64_t seed = 0;
    int n_nodes = 10;
    int rounds = 20;
    double timeout_s = 30.0;
    std::string export_dir;  // empty = "runs/<name>"
    Topology topology;
    double dirichlet_alpha = 0.5;
    AttackConfig attack;
    ReputationConfig reputation;
    TrainerConfig trainer;
    NetworkConfig network;
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

/// Canonical serialization with every field present; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace dfl
