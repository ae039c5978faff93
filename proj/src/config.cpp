#include "dfl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dfl/errors.hpp"

namespace dfl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void expect_keys(const json& obj, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, _] : obj.items())
        if (!known.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
}

template <class T>
T get_or(const json& obj, const std::string& path, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path.empty() ? key : path + "." + key, "wrong type");
    }
}

void check_range(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

TopologyKind topology_kind_from(const std::string& s, const std::string& path) {
    if (s == "fully") return TopologyKind::fully;
    if (s == "ring") return TopologyKind::ring;
    if (s == "random") return TopologyKind::random;
    fail(path, "expected one of fully|ring|random");
}

std::string to_string(TopologyKind k) {
    switch (k) {
        case TopologyKind::fully: return "fully";
        case TopologyKind::ring: return "ring";
        case TopologyKind::random: return "random";
    }
    return "fully";
}

AttackKind attack_kind_from(const std::string& s, const std::string& path) {
    if (s == "none") return AttackKind::none;
    if (s == "poisoning") return AttackKind::poisoning;
    if (s == "delayer") return AttackKind::delayer;
    if (s == "flooding") return AttackKind::flooding;
    fail(path, "expected one of none|poisoning|delayer|flooding");
}

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::none: return "none";
        case AttackKind::poisoning: return "poisoning";
        case AttackKind::delayer: return "delayer";
        case AttackKind::flooding: return "flooding";
    }
    return "none";
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");

    expect_keys(root, "",
                {"schema_version", "name", "seed", "n_nodes", "rounds", "timeout_s", "export_dir",
                 "topology", "dirichlet_alpha", "attack", "reputation", "trainer", "network"});

    ScenarioConfig cfg;
    cfg.schema_version = get_or(root, "", "schema_version", 1);
    check_range(cfg.schema_version == 1, "schema_version", "unsupported version");
    if (!root.contains("name")) fail("name", "required");
    cfg.name = get_or<std::string>(root, "", "name", "");
    check_range(!cfg.name.empty(), "name", "must be non-empty");
    if (!root.contains("seed")) fail("seed", "required");
    cfg.seed = get_or<std::uint64_t>(root, "", "seed", 0);
    cfg.n_nodes = get_or(root, "", "n_nodes", cfg.n_nodes);
    check_range(cfg.n_nodes >= 2 && cfg.n_nodes <= 1000, "n_nodes", "must be in [2, 1000]");
    cfg.rounds = get_or(root, "", "rounds", cfg.rounds);
    check_range(cfg.rounds >= 0, "rounds", "must be >= 0");
    cfg.timeout_s = get_or(root, "", "timeout_s", cfg.timeout_s);
    check_range(cfg.timeout_s > 0.0, "timeout_s", "must be > 0");
    cfg.export_dir = get_or<std::string>(root, "", "export_dir", "");
    cfg.dirichlet_alpha = get_or(root, "", "dirichlet_alpha", cfg.dirichlet_alpha);
    check_range(cfg.dirichlet_alpha > 0.0, "dirichlet_alpha", "must be > 0");

    if (root.contains("topology")) {
        const json& t = root.at("topology");
        expect_keys(t, "topology", {"kind", "edge_prob"});
        cfg.topology.kind =
            topology_kind_from(get_or<std::string>(t, "topology", "kind", "fully"), "topology.kind");
        cfg.topology.edge_prob = get_or(t, "topology", "edge_prob", cfg.topology.edge_prob);
        check_range(cfg.topology.edge_prob > 0.0 && cfg.topology.edge_prob <= 1.0,
                    "topology.edge_prob", "must be in (0, 1]");
    }
    cfg.topology.n = cfg.n_nodes;

    if (root.contains("attack")) {
        const json& a = root.at("attack");
        expect_keys(a, "attack",
                    {"kind", "attacker_fraction", "start_round", "interval", "end_round",
                     "poison_sigma", "delay_s", "flood_multiplier"});
        cfg.attack.kind =
            attack_kind_from(get_or<std::string>(a, "attack", "kind", "none"), "attack.kind");
        cfg.attack.attacker_fraction =
            get_or(a, "attack", "attacker_fraction", cfg.attack.attacker_fraction);
        check_range(cfg.attack.attacker_fraction >= 0.0 && cfg.attack.attacker_fraction <= 1.0,
                    "attack.attacker_fraction", "must be in [0, 1]");
        cfg.attack.start_round = get_or(a, "attack", "start_round", cfg.attack.start_round);
        check_range(cfg.attack.start_round >= 0, "attack.start_round", "must be >= 0");
        cfg.attack.interval = get_or(a, "attack", "interval", cfg.attack.interval);
        check_range(cfg.attack.interval >= 1, "attack.interval", "must be >= 1");
        cfg.attack.end_round = get_or(a, "attack", "end_round", cfg.attack.end_round);
        check_range(cfg.attack.end_round >= -1, "attack.end_round", "must be >= -1");
        cfg.attack.poison_sigma = get_or(a, "attack", "poison_sigma", cfg.attack.poison_sigma);
        check_range(cfg.attack.poison_sigma >= 0.0, "attack.poison_sigma", "must be >= 0");
        cfg.attack.delay_s = get_or(a, "attack", "delay_s", cfg.attack.delay_s);
        check_range(cfg.attack.delay_s >= 0.0, "attack.delay_s", "must be >= 0");
        cfg.attack.flood_multiplier =
            get_or(a, "attack", "flood_multiplier", cfg.attack.flood_multiplier);
        check_range(cfg.attack.flood_multiplier >= 1, "attack.flood_multiplier", "must be >= 1");
    }

    if (root.contains("reputation")) {
        const json& r = root.at("reputation");
        expect_keys(r, "reputation",
                    {"enabled", "threshold", "initial", "eta", "lambda", "mu_smooth", "tau",
                     "delta", "bootstrap_rounds", "gamma", "weight_floor", "omega_current",
                     "history_decay", "history_window", "latency_baseline_round0",
                     "outlier_factor", "flow"});
        ReputationConfig& rep = cfg.reputation;
        rep.enabled = get_or(r, "reputation", "enabled", rep.enabled);
        rep.threshold = get_or(r, "reputation", "threshold", rep.threshold);
        check_range(rep.threshold >= 0.0 && rep.threshold <= 1.0, "reputation.threshold",
                    "must be in [0, 1]");
        rep.initial = get_or(r, "reputation", "initial", rep.initial);
        check_range(rep.initial >= 0.0 && rep.initial <= 1.0, "reputation.initial",
                    "must be in [0, 1]");
        rep.eta = get_or(r, "reputation", "eta", rep.eta);
        check_range(rep.eta >= 0.0 && rep.eta <= 1.0, "reputation.eta", "must be in [0, 1]");
        rep.lambda = get_or(r, "reputation", "lambda", rep.lambda);
        check_range(rep.lambda >= 0.0 && rep.lambda <= 1.0, "reputation.lambda",
                    "must be in [0, 1]");
        rep.mu_smooth = get_or(r, "reputation", "mu_smooth", rep.mu_smooth);
        check_range(rep.mu_smooth >= 0.0 && rep.mu_smooth <= 1.0, "reputation.mu_smooth",
                    "must be in [0, 1]");
        rep.tau = get_or(r, "reputation", "tau", rep.tau);
        check_range(rep.tau >= 0.0, "reputation.tau", "must be >= 0 (0 = adaptive)");
        rep.delta = get_or(r, "reputation", "delta", rep.delta);
        check_range(rep.delta >= 0.0 && rep.delta <= 1.0, "reputation.delta", "must be in [0, 1]");
        rep.bootstrap_rounds = get_or(r, "reputation", "bootstrap_rounds", rep.bootstrap_rounds);
        check_range(rep.bootstrap_rounds >= 0, "reputation.bootstrap_rounds", "must be >= 0");
        if (r.contains("gamma")) {
            const auto g = get_or<std::vector<double>>(r, "reputation", "gamma", {});
            check_range(g.size() == 4, "reputation.gamma", "must have 4 entries");
            rep.gamma = {g[0], g[1], g[2], g[3]};
            check_range(similarity_weights_valid(rep.gamma), "reputation.gamma",
                        "must be >= 0 and sum to 1");
        }
        rep.weight_floor = get_or(r, "reputation", "weight_floor", rep.weight_floor);
        check_range(rep.weight_floor >= 0.0 && rep.weight_floor <= 0.25, "reputation.weight_floor",
                    "must be in [0, 0.25]");
        rep.omega_current = get_or(r, "reputation", "omega_current", rep.omega_current);
        check_range(rep.omega_current > 0.0 && rep.omega_current <= 1.0,
                    "reputation.omega_current", "must be in (0, 1]");
        rep.history_decay = get_or(r, "reputation", "history_decay", rep.history_decay);
        check_range(rep.history_decay > 0.0 && rep.history_decay < 1.0, "reputation.history_decay",
                    "must be in (0, 1)");
        rep.history_window = get_or(r, "reputation", "history_window", rep.history_window);
        check_range(rep.history_window >= 1, "reputation.history_window", "must be >= 1");
        rep.latency_baseline_round0 =
            get_or(r, "reputation", "latency_baseline_round0", rep.latency_baseline_round0);
        rep.outlier_factor = get_or(r, "reputation", "outlier_factor", rep.outlier_factor);
        check_range(rep.outlier_factor >= 1.0, "reputation.outlier_factor", "must be >= 1");
        if (r.contains("flow")) {
            const json& f = r.at("flow");
            expect_keys(f, "reputation.flow",
                        {"epsilon", "extra_penalty", "recurrence_window", "recurrence_threshold",
                         "recurrence_factor", "floor_base", "smoothing"});
            FlowConfig& fc = rep.flow;
            fc.epsilon = get_or(f, "reputation.flow", "epsilon", fc.epsilon);
            check_range(fc.epsilon > 0.0, "reputation.flow.epsilon", "must be > 0");
            fc.extra_penalty = get_or(f, "reputation.flow", "extra_penalty", fc.extra_penalty);
            check_range(fc.extra_penalty >= 0.0, "reputation.flow.extra_penalty", "must be >= 0");
            fc.recurrence_window =
                get_or(f, "reputation.flow", "recurrence_window", fc.recurrence_window);
            check_range(fc.recurrence_window >= 1, "reputation.flow.recurrence_window",
                        "must be >= 1");
            fc.recurrence_threshold =
                get_or(f, "reputation.flow", "recurrence_threshold", fc.recurrence_threshold);
            check_range(fc.recurrence_threshold >= 0.0 && fc.recurrence_threshold <= 1.0,
                        "reputation.flow.recurrence_threshold", "must be in [0, 1]");
            fc.recurrence_factor =
                get_or(f, "reputation.flow", "recurrence_factor", fc.recurrence_factor);
            check_range(fc.recurrence_factor >= 0.0 && fc.recurrence_factor <= 1.0,
                        "reputation.flow.recurrence_factor", "must be in [0, 1]");
            fc.floor_base = get_or(f, "reputation.flow", "floor_base", fc.floor_base);
            check_range(fc.floor_base >= 0.0 && fc.floor_base <= 1.0,
                        "reputation.flow.floor_base", "must be in [0, 1]");
            if (f.contains("smoothing")) {
                const auto s = get_or<std::vector<double>>(f, "reputation.flow", "smoothing", {});
                check_range(s.size() == 3, "reputation.flow.smoothing", "must have 3 entries");
                check_range(s[0] > 0.0 && s[1] >= 0.0 && s[2] >= 0.0, "reputation.flow.smoothing",
                            "first entry must be > 0, all >= 0");
                fc.smooth_weights = {s[0], s[1], s[2]};
            }
        }
    }

    if (root.contains("trainer")) {
        const json& t = root.at("trainer");
        expect_keys(t, "trainer",
                    {"dim_in", "classes", "samples_per_node", "lr", "epochs", "test_fraction",
                     "class_separation", "noise"});
        TrainerConfig& tr = cfg.trainer;
        tr.dim_in = get_or(t, "trainer", "dim_in", tr.dim_in);
        check_range(tr.dim_in >= 1, "trainer.dim_in", "must be >= 1");
        tr.classes = get_or(t, "trainer", "classes", tr.classes);
        check_range(tr.classes >= 2, "trainer.classes", "must be >= 2");
        tr.samples_per_node = get_or(t, "trainer", "samples_per_node", tr.samples_per_node);
        check_range(tr.samples_per_node >= 1, "trainer.samples_per_node", "must be >= 1");
        tr.lr = get_or(t, "trainer", "lr", tr.lr);
        check_range(tr.lr >= 0.0, "trainer.lr", "must be >= 0");
        tr.epochs = get_or(t, "trainer", "epochs", tr.epochs);
        check_range(tr.epochs >= 0, "trainer.epochs", "must be >= 0");
        tr.test_fraction = get_or(t, "trainer", "test_fraction", tr.test_fraction);
        check_range(tr.test_fraction > 0.0 && tr.test_fraction < 1.0, "trainer.test_fraction",
                    "must be in (0, 1)");
        tr.class_separation = get_or(t, "trainer", "class_separation", tr.class_separation);
        check_range(tr.class_separation > 0.0, "trainer.class_separation", "must be > 0");
        tr.noise = get_or(t, "trainer", "noise", tr.noise);
        check_range(tr.noise > 0.0, "trainer.noise", "must be > 0");
    }

    if (root.contains("network")) {
        const json& nw = root.at("network");
        expect_keys(nw, "network", {"base_latency_s", "jitter_s", "base_messages"});
        cfg.network.base_latency_s =
            get_or(nw, "network", "base_latency_s", cfg.network.base_latency_s);
        check_range(cfg.network.base_latency_s > 0.0, "network.base_latency_s", "must be > 0");
        cfg.network.jitter_s = get_or(nw, "network", "jitter_s", cfg.network.jitter_s);
        check_range(cfg.network.jitter_s >= 0.0, "network.jitter_s", "must be >= 0");
        cfg.network.base_messages = get_or(nw, "network", "base_messages", cfg.network.base_messages);
        check_range(cfg.network.base_messages >= 1, "network.base_messages", "must be >= 1");
    }

    // sanity across sections
    const int min_samples = cfg.trainer.classes;
    check_range(cfg.trainer.samples_per_node * cfg.n_nodes >= min_samples,
                "trainer.samples_per_node", "dataset smaller than the class count");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json root;
    root["schema_version"] = cfg.schema_version;
    root["name"] = cfg.name;
    root["seed"] = cfg.seed;
    root["n_nodes"] = cfg.n_nodes;
    root["rounds"] = cfg.rounds;
    root["timeout_s"] = cfg.timeout_s;
    root["export_dir"] = cfg.export_dir;
    root["dirichlet_alpha"] = cfg.dirichlet_alpha;
    root["topology"] = {{"kind", to_string(cfg.topology.kind)},
                        {"edge_prob", cfg.topology.edge_prob}};
    root["attack"] = {{"kind", to_string(cfg.attack.kind)},
                      {"attacker_fraction", cfg.attack.attacker_fraction},
                      {"start_round", cfg.attack.start_round},
                      {"interval", cfg.attack.interval},
                      {"end_round", cfg.attack.end_round},
                      {"poison_sigma", cfg.attack.poison_sigma},
                      {"delay_s", cfg.attack.delay_s},
                      {"flood_multiplier", cfg.attack.flood_multiplier}};
    root["reputation"] = {
        {"enabled", cfg.reputation.enabled},
        {"threshold", cfg.reputation.threshold},
        {"initial", cfg.reputation.initial},
        {"eta", cfg.reputation.eta},
        {"lambda", cfg.reputation.lambda},
        {"mu_smooth", cfg.reputation.mu_smooth},
        {"tau", cfg.reputation.tau},
        {"delta", cfg.reputation.delta},
        {"bootstrap_rounds", cfg.reputation.bootstrap_rounds},
        {"gamma",
         {cfg.reputation.gamma.cosine, cfg.reputation.gamma.euclidean,
          cfg.reputation.gamma.manhattan, cfg.reputation.gamma.pearson}},
        {"weight_floor", cfg.reputation.weight_floor},
        {"omega_current", cfg.reputation.omega_current},
        {"history_decay", cfg.reputation.history_decay},
        {"history_window", cfg.reputation.history_window},
        {"latency_baseline_round0", cfg.reputation.latency_baseline_round0},
        {"outlier_factor", cfg.reputation.outlier_factor},
        {"flow",
         {{"epsilon", cfg.reputation.flow.epsilon},
          {"extra_penalty", cfg.reputation.flow.extra_penalty},
          {"recurrence_window", cfg.reputation.flow.recurrence_window},
          {"recurrence_threshold", cfg.reputation.flow.recurrence_threshold},
          {"recurrence_factor", cfg.reputation.flow.recurrence_factor},
          {"floor_base", cfg.reputation.flow.floor_base},
          {"smoothing",
           {cfg.reputation.flow.smooth_weights[0], cfg.reputation.flow.smooth_weights[1],
            cfg.reputation.flow.smooth_weights[2]}}}}};
    root["trainer"] = {{"dim_in", cfg.trainer.dim_in},
                       {"classes", cfg.trainer.classes},
                       {"samples_per_node", cfg.trainer.samples_per_node},
                       {"lr", cfg.trainer.lr},
                       {"epochs", cfg.trainer.epochs},
                       {"test_fraction", cfg.trainer.test_fraction},
                       {"class_separation", cfg.trainer.class_separation},
                       {"noise", cfg.trainer.noise}};
    root["network"] = {{"base_latency_s", cfg.network.base_latency_s},
                       {"jitter_s", cfg.network.jitter_s},
                       {"base_messages", cfg.network.base_messages}};
    return root.dump(2) + "\n";
}

}  // namespace dfl
