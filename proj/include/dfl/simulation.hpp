#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dfl/aggregation.hpp"
#include "dfl/attack.hpp"
#include "dfl/config.hpp"
#include "dfl/core.hpp"
#include "dfl/reputation.hpp"
#include "dfl/rng.hpp"
#include "dfl/topology.hpp"
#include "dfl/trainer.hpp"

namespace dfl {

struct NeighborRoundLog {
    MetricVector metrics;
    WeightVector weights;
    double score = 1.0;
    double reputation = 1.0;
    bool accepted = false;
    int message_count = 0;
    double latency = 0.0;     // latency of the scored model, -1 when none arrived
    int model_round = -1;     // round of the scored model, -1 when none arrived
};

struct NodeRoundLog {
    double f1 = 0.0;
    double loss = 0.0;
    int accepted_models = 0;
    long cost_units = 0;  // messages processed this round
    std::map<NodeId, NeighborRoundLog> per_neighbor;
};

struct RoundLog {
    int round = 0;
    double t_start = 0.0;
    double duration = 0.0;
    std::vector<NodeRoundLog> nodes;
};

struct SimulationResult {
    std::vector<RoundLog> rounds;
    std::vector<bool> is_attacker;
    Adjacency topology;

    /// Mean fused reputation over (benign evaluator -> subject in `subjects`).
    double mean_reputation(int round, bool subjects_attackers) const;
    double mean_benign_f1(int round) const;
    double mean_benign_accepted(int round) const;
    long total_benign_cost() const;
};

/// Event-driven, barrier-synchronized round simulator over a virtual clock.
/// Single-threaded and deterministic: identical config + seed reproduce the
/// exact event order and therefore identical logs.
class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& cfg);

    SimulationResult run();

    /// Current virtual time in seconds; starts at 0 and only advances when
    /// round events consume time.
    double clock_now() const { return now_; }

    const std::vector<bool>& attackers() const { return is_attacker_; }

  private:
    struct Message {
        enum class Kind { model, ack, reputation, junk };
        Kind kind = Kind::ack;
        NodeId sender = -1;
        NodeId receiver = -1;
        int model_round = -1;
        double send_time = 0.0;
        double arrival_time = 0.0;
        ModelVector params;                                  // model only
        std::vector<std::pair<NodeId, double>> opinions;     // reputation only
        std::uint64_t seq = 0;                               // stable tiebreak
    };

    struct Node {
        NodeId id = -1;
        bool attacker = false;
        LocalModel model;
        std::vector<int> shard;
        ReputationState view;
        std::map<NodeId, double> reputation_now;  // fused values after last update
        std::vector<double> prev_round_counts;    // incoming per-pair counts, ref for flow
        Substream latency_rng{0};
        Substream weights_rng{0};
        Substream attack_rng{0};
    };

    void broadcast(int round);
    double close_round(int round);  // returns round duration
    void deliver_and_update(int round, double round_end, RoundLog& log);

    ScenarioConfig cfg_;
    RngStream rng_;
    Adjacency topo_;
    SyntheticDataset data_;
    std::vector<int> test_rows_;
    std::vector<Node> nodes_;
    std::vector<bool> is_attacker_;
    std::vector<Message> in_flight_;
    std::vector<double> round_start_times_;
    double now_ = 0.0;
    std::uint64_t seq_counter_ = 0;
};

/// Convenience wrapper: build and run in one call.
SimulationResult run_scenario(const ScenarioConfig& cfg);

}  // namespace dfl
