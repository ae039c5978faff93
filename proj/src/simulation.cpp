#include "dfl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dfl/similarity.hpp"

namespace dfl {

Simulation::Simulation(const ScenarioConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    auto topo_rng = rng_.stream("topology");
    Topology topo_cfg = cfg_.topology;
    topo_cfg.n = cfg_.n_nodes;
    topo_ = build_topology(topo_cfg, topo_rng);

    // dataset plus a shared holdout used for every F1 evaluation
    const int total = cfg_.trainer.samples_per_node * cfg_.n_nodes;
    auto data_rng = rng_.stream("dataset");
    data_ = generate_dataset(total, cfg_.trainer.dim_in, cfg_.trainer.classes, data_rng,
                             cfg_.trainer.class_separation, cfg_.trainer.noise);
    auto split_rng = rng_.stream("testsplit");
    const int test_count =
        std::max(1, static_cast<int>(std::lround(cfg_.trainer.test_fraction * total)));
    test_rows_ = split_rng.sample_without_replacement(total, test_count);
    std::sort(test_rows_.begin(), test_rows_.end());

    std::vector<int> train_rows;
    {
        std::vector<bool> is_test(static_cast<std::size_t>(total), false);
        for (int r : test_rows_) is_test[static_cast<std::size_t>(r)] = true;
        for (int r = 0; r < total; ++r)
            if (!is_test[static_cast<std::size_t>(r)]) train_rows.push_back(r);
    }
    std::vector<int> train_labels(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i)
        train_labels[i] = data_.labels[static_cast<std::size_t>(train_rows[i])];
    auto part_rng = rng_.stream("partition");
    const auto pool_shards =
        dirichlet_partition(train_labels, cfg_.dirichlet_alpha, cfg_.n_nodes, part_rng);

    is_attacker_.assign(static_cast<std::size_t>(cfg_.n_nodes), false);
    if (cfg_.attack.kind != AttackKind::none) {
        auto att_rng = rng_.stream("attackers");
        for (NodeId id : select_attackers(cfg_.n_nodes, cfg_.attack.attacker_fraction, att_rng))
            is_attacker_[static_cast<std::size_t>(id)] = true;
    }

    nodes_.resize(static_cast<std::size_t>(cfg_.n_nodes));
    for (NodeId id = 0; id < cfg_.n_nodes; ++id) {
        Node& node = nodes_[static_cast<std::size_t>(id)];
        node.id = id;
        node.attacker = is_attacker_[static_cast<std::size_t>(id)];
        node.model = LocalModel::zeros(cfg_.trainer.classes, cfg_.trainer.dim_in);
        for (int pool_idx : pool_shards[static_cast<std::size_t>(id)])
            node.shard.push_back(train_rows[static_cast<std::size_t>(pool_idx)]);
        node.latency_rng = rng_.stream("latency", static_cast<std::uint64_t>(id));
        node.weights_rng = rng_.stream("weights", static_cast<std::uint64_t>(id));
        node.attack_rng = rng_.stream("attack", static_cast<std::uint64_t>(id));

        const double init_rep =
            cfg_.reputation.enabled ? initial_reputation(cfg_.reputation.initial) : 1.0;
        for (NodeId nb : topo_.neighbors[static_cast<std::size_t>(id)]) {
            node.reputation_now[nb] = init_rep;
            NeighborRecord rec;
            rec.fraction.lambda = cfg_.reputation.lambda;
            rec.latency.mu_smooth = cfg_.reputation.mu_smooth;
            rec.latency.tau = cfg_.reputation.tau;
            rec.latency.delta = cfg_.reputation.delta;
            rec.latency.bootstrap_rounds =
                static_cast<std::size_t>(cfg_.reputation.bootstrap_rounds);
            rec.flow.cfg = cfg_.reputation.flow;
            rec.reputation_history.push_back(init_rep);
            node.view.neighbors.emplace(nb, std::move(rec));
        }
    }
}

void Simulation::broadcast(int round) {
    const double t0 = now_;
    for (auto& node : nodes_) {
        const bool active = node.attacker && attack_active(cfg_.attack, round);
        ModelVector outgoing = node.model.params;
        if (active && cfg_.attack.kind == AttackKind::poisoning)
            outgoing = apply_poisoning(outgoing, cfg_.attack.poison_sigma, node.attack_rng);

        auto latency = [&]() {
            return cfg_.network.base_latency_s + node.latency_rng.uniform(0.0, cfg_.network.jitter_s);
        };

        for (NodeId nb : topo_.neighbors[static_cast<std::size_t>(node.id)]) {
            Message model_msg;
            model_msg.kind = Message::Kind::model;
            model_msg.sender = node.id;
            model_msg.receiver = nb;
            model_msg.model_round = round;
            model_msg.send_time = t0;
            double dispatch = t0;
            if (active && cfg_.attack.kind == AttackKind::delayer)
                dispatch = apply_delay(t0, cfg_.attack.delay_s);
            model_msg.arrival_time = dispatch + latency();
            model_msg.params = outgoing;
            model_msg.seq = seq_counter_++;
            in_flight_.push_back(std::move(model_msg));

            Message ack;
            ack.kind = Message::Kind::ack;
            ack.sender = node.id;
            ack.receiver = nb;
            ack.send_time = t0;
            ack.arrival_time = t0 + latency();
            ack.seq = seq_counter_++;
            in_flight_.push_back(std::move(ack));

            Message rep;
            rep.kind = Message::Kind::reputation;
            rep.sender = node.id;
            rep.receiver = nb;
            rep.model_round = round;  // the round the opinions were formed in
            rep.send_time = t0;
            rep.arrival_time = t0 + latency();
            rep.opinions.assign(node.reputation_now.begin(), node.reputation_now.end());
            rep.seq = seq_counter_++;
            in_flight_.push_back(std::move(rep));

            if (active && cfg_.attack.kind == AttackKind::flooding) {
                const int extra = apply_flooding(cfg_.network.base_messages,
                                                 cfg_.attack.flood_multiplier) -
                                  cfg_.network.base_messages;
                for (int j = 0; j < extra; ++j) {
                    Message junk;
                    junk.kind = Message::Kind::junk;
                    junk.sender = node.id;
                    junk.receiver = nb;
                    junk.send_time = t0;
                    junk.arrival_time = t0 + latency();
                    junk.seq = seq_counter_++;
                    in_flight_.push_back(std::move(junk));
                }
            }
        }
    }
}

double Simulation::close_round(int) {
    // the round ends when this round's traffic has settled, or at timeout;
    // closing on models alone would spill trailing acks into the next round
    // and distort the per-round message counts
    double latest = 0.0;
    bool missed = false;
    for (const auto& msg : in_flight_) {
        if (msg.send_time != now_) continue;  // sent in an earlier round
        const double offset = msg.arrival_time - now_;
        if (offset > cfg_.timeout_s)
            missed = true;
        else
            latest = std::max(latest, offset);
    }
    return missed ? cfg_.timeout_s : latest;
}

void Simulation::deliver_and_update(int round, double round_end, RoundLog& log) {
    std::vector<Message> delivered;
    {
        std::vector<Message> still_flying;
        still_flying.reserve(in_flight_.size());
        for (auto& msg : in_flight_) {
            if (msg.arrival_time <= round_end)
                delivered.push_back(std::move(msg));
            else
                still_flying.push_back(std::move(msg));
        }
        in_flight_ = std::move(still_flying);
    }
    std::sort(delivered.begin(), delivered.end(), [](const Message& a, const Message& b) {
        return a.arrival_time != b.arrival_time ? a.arrival_time < b.arrival_time : a.seq < b.seq;
    });

    const auto n = static_cast<std::size_t>(cfg_.n_nodes);
    std::vector<std::map<NodeId, int>> counts(n);
    std::vector<std::map<NodeId, std::vector<const Message*>>> models(n);
    // feedback about subject s at receiver r: (evaluator, value)
    std::vector<std::map<NodeId, std::vector<std::pair<NodeId, double>>>> feedback(n);
    for (const auto& msg : delivered) {
        const auto r = static_cast<std::size_t>(msg.receiver);
        counts[r][msg.sender] += 1;
        if (msg.kind == Message::Kind::model) models[r][msg.sender].push_back(&msg);
        if (msg.kind == Message::Kind::reputation)
            for (const auto& [subject, value] : msg.opinions)
                feedback[r][subject].emplace_back(msg.sender, value);
    }

    const AggregationPolicy policy{cfg_.reputation.threshold, true};

    // --- reputation update first: the freshly evaluated values gate this
    // round's aggregation. Models are compared against the trained local
    // model, which is still pre-aggregation at this point.
    for (auto& node : nodes_) {
        const auto idx = static_cast<std::size_t>(node.id);
        NodeRoundLog& nlog = log.nodes[idx];
        for (const auto& [sender, cnt] : counts[idx]) nlog.cost_units += cnt;
        const std::map<NodeId, double> rep_snapshot = node.reputation_now;

        std::vector<double> incoming_counts;
        const FlowStats prev_stats = flow_stats(node.prev_round_counts);

        for (NodeId nb : topo_.neighbors[idx]) {
            NeighborRecord& rec = node.view.neighbors.at(nb);
            NeighborRoundLog& row = nlog.per_neighbor[nb];
            const int count = counts[idx].count(nb) ? counts[idx].at(nb) : 0;
            incoming_counts.push_back(static_cast<double>(count));
            row.message_count = count;

            const Message* best = nullptr;
            if (auto it = models[idx].find(nb); it != models[idx].end())
                for (const Message* m : it->second)
                    if (best == nullptr || m->model_round > best->model_round) best = m;

            MetricVector metrics;
            if (best != nullptr && best->model_round > rec.last_model_round) {
                metrics.similarity =
                    model_similarity(node.model.params, best->params, cfg_.reputation.gamma);
                rec.last_similarity = metrics.similarity;

                if (rec.last_model_round >= 0) {
                    const ModelVector delta = (best->params - rec.last_model).cwiseAbs();
                    std::vector<double> mags(delta.data(), delta.data() + delta.size());
                    const double t_current = percentile(mags, 0.75);
                    int changed = 0;
                    for (double m : mags)
                        if (m > t_current) ++changed;
                    const double f_current =
                        static_cast<double>(changed) / static_cast<double>(mags.size());
                    metrics.fraction = fraction_changed_score(rec.fraction, f_current, t_current);
                    // adversarial-scale samples stay out of the reference statistics
                    if (!fraction_gross_outlier(rec.fraction, f_current, t_current,
                                                cfg_.reputation.outlier_factor)) {
                        rec.fraction.f_values.push_back(f_current);
                        rec.fraction.t_values.push_back(t_current);
                    }
                } else {
                    metrics.fraction = 1.0;
                }
                rec.fraction.prev_final = metrics.fraction;

                const double lat =
                    best->arrival_time -
                    round_start_times_[static_cast<std::size_t>(best->model_round)];
                row.latency = lat;
                row.model_round = best->model_round;
                const bool freeze = cfg_.reputation.latency_baseline_round0;
                metrics.latency = latency_score(rec.latency, lat, freeze);
                if (!latency_gross_outlier(rec.latency, lat, freeze,
                                           cfg_.reputation.outlier_factor)) {
                    rec.latency.samples.push_back(lat);
                    if (round == 0) rec.latency.round0_count = rec.latency.samples.size();
                }
                rec.latency.prev_smoothed = metrics.latency;

                rec.last_model = best->params;
                rec.last_model_round = best->model_round;
            } else {
                // nothing new arrived: halve fraction and latency, carry similarity
                metrics.similarity = rec.last_similarity;
                metrics.fraction = missing_model_penalty(rec.fraction.prev_final);
                rec.fraction.prev_final = metrics.fraction;
                metrics.latency = missing_model_penalty(rec.latency.prev_smoothed);
                rec.latency.prev_smoothed = metrics.latency;
                row.latency = -1.0;
                row.model_round = -1;
            }

            if (round == 0) {
                metrics.messages = 1.0;  // round-0 counts become the first reference
            } else {
                metrics.messages =
                    message_flow_score(rec.flow, static_cast<double>(count), prev_stats);
                rec.flow.past_scores.push_back(metrics.messages);
                if (rec.flow.past_scores.size() > 16)
                    rec.flow.past_scores.erase(rec.flow.past_scores.begin());
            }

            row.metrics = metrics;

            if (!cfg_.reputation.enabled) {
                rec.metric_history.push_back(metrics);
                row.weights = {1.0, 1.0, 1.0, 1.0};
                row.score = 1.0;
                row.reputation = 1.0;
                continue;
            }

            const MetricVector reference = reference_means(rec, round, metrics);
            const WeightVector weights =
                dynamic_weights(metrics, reference, cfg_.reputation.weight_floor, node.weights_rng);
            const double score = intermediate_score(metrics, weights);

            const HistoryWeights hw{cfg_.reputation.omega_current, cfg_.reputation.history_decay,
                                    static_cast<std::size_t>(cfg_.reputation.history_window)};
            const double local_rep = update_reputation(rec.reputation_history, score, hw);

            std::vector<double> admitted;
            if (auto it = feedback[idx].find(nb); it != feedback[idx].end()) {
                for (const auto& [evaluator, value] : it->second) {
                    if (evaluator == nb || evaluator == node.id) continue;
                    const auto rit = rep_snapshot.find(evaluator);
                    if (rit != rep_snapshot.end() && rit->second >= cfg_.reputation.threshold)
                        admitted.push_back(value);
                }
            }
            const double fused = fuse_feedback(local_rep, admitted, cfg_.reputation.eta);

            rec.metric_history.push_back(metrics);
            rec.weight_history.push_back(weights);
            rec.score_history.push_back(score);
            rec.reputation_history.push_back(fused);
            if (rec.reputation_history.size() > 64)
                rec.reputation_history.erase(rec.reputation_history.begin());
            node.reputation_now[nb] = fused;

            row.weights = weights;
            row.score = score;
            row.reputation = fused;
        }
        node.prev_round_counts = std::move(incoming_counts);
    }

    // --- filtering and aggregation on the fresh reputations
    for (auto& node : nodes_) {
        const auto idx = static_cast<std::size_t>(node.id);
        NodeRoundLog& nlog = log.nodes[idx];

        std::vector<ModelMessage> candidates;
        for (const auto& [sender, msgs] : models[idx]) {
            const Message* current = nullptr;
            for (const Message* m : msgs)
                if (m->model_round == round) current = m;
            if (current != nullptr) {
                ModelMessage mm;
                mm.sender = sender;
                mm.model_round = current->model_round;
                mm.params = current->params;
                mm.send_time = current->send_time;
                mm.arrival_time = current->arrival_time;
                candidates.push_back(std::move(mm));
            }
        }
        std::vector<std::pair<ModelVector, double>> accepted;
        if (cfg_.reputation.enabled) {
            for (auto& [msg, weight] :
                 filter_models(candidates, node.reputation_now, policy, cfg_.reputation.initial)) {
                nlog.per_neighbor[msg.sender].accepted = true;
                accepted.emplace_back(std::move(msg.params), weight);
            }
        } else {
            for (auto& msg : candidates) {
                nlog.per_neighbor[msg.sender].accepted = true;
                accepted.emplace_back(std::move(msg.params), 1.0);
            }
        }
        nlog.accepted_models = static_cast<int>(accepted.size());
        node.model.params = reputation_weighted_aggregate(node.model.params, accepted, policy);
    }
}

SimulationResult Simulation::run() {
    SimulationResult result;
    result.is_attacker = is_attacker_;
    result.topology = topo_;
    round_start_times_.clear();

    for (int round = 0; round < cfg_.rounds; ++round) {
        round_start_times_.push_back(now_);
        RoundLog log;
        log.round = round;
        log.t_start = now_;
        log.nodes.resize(static_cast<std::size_t>(cfg_.n_nodes));

        for (auto& node : nodes_) {
            node.model =
                local_train(node.model, data_, node.shard, cfg_.trainer.epochs, cfg_.trainer.lr);
            log.nodes[static_cast<std::size_t>(node.id)].loss =
                multinomial_loss(node.model, data_, node.shard);
        }

        broadcast(round);
        const double duration = close_round(round);
        log.duration = duration;
        deliver_and_update(round, now_ + duration, log);
        now_ += duration;

        for (const auto& node : nodes_)
            log.nodes[static_cast<std::size_t>(node.id)].f1 =
                evaluate_f1(node.model, data_, test_rows_);

        result.rounds.push_back(std::move(log));
    }
    return result;
}

SimulationResult run_scenario(const ScenarioConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

double SimulationResult::mean_reputation(int round, bool subjects_attackers) const {
    const auto& log = rounds.at(static_cast<std::size_t>(round));
    double total = 0.0;
    int count = 0;
    for (std::size_t node = 0; node < log.nodes.size(); ++node) {
        if (is_attacker[node]) continue;  // benign evaluators only
        for (const auto& [nb, row] : log.nodes[node].per_neighbor) {
            if (is_attacker[static_cast<std::size_t>(nb)] != subjects_attackers) continue;
            total += row.reputation;
            ++count;
        }
    }
    return count > 0 ? total / count : std::numeric_limits<double>::quiet_NaN();
}

double SimulationResult::mean_benign_f1(int round) const {
    const auto& log = rounds.at(static_cast<std::size_t>(round));
    double total = 0.0;
    int count = 0;
    for (std::size_t node = 0; node < log.nodes.size(); ++node) {
        if (is_attacker[node]) continue;
        total += log.nodes[node].f1;
        ++count;
    }
    return count > 0 ? total / count : std::numeric_limits<double>::quiet_NaN();
}

double SimulationResult::mean_benign_accepted(int round) const {
    const auto& log = rounds.at(static_cast<std::size_t>(round));
    double total = 0.0;
    int count = 0;
    for (std::size_t node = 0; node < log.nodes.size(); ++node) {
        if (is_attacker[node]) continue;
        total += log.nodes[node].accepted_models;
        ++count;
    }
    return count > 0 ? total / count : std::numeric_limits<double>::quiet_NaN();
}

long SimulationResult::total_benign_cost() const {
    long total = 0;
    for (const auto& log : rounds)
        for (std::size_t node = 0; node < log.nodes.size(); ++node)
            if (!is_attacker[node]) total += log.nodes[node].cost_units;
    return total;
}

}  // namespace dfl
