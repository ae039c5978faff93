#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dfl/config.hpp"
#include "dfl/errors.hpp"
#include "dfl/export.hpp"
#include "dfl/simulation.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dfl::ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<bool> reputation_enabled;
};

dfl::ScenarioConfig apply_overrides(dfl::ScenarioConfig cfg, const Overrides& ov) {
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.reputation_enabled) cfg.reputation.enabled = *ov.reputation_enabled;
    return cfg;
}

fs::path resolve_out_dir(const dfl::ScenarioConfig& cfg, const std::string& out_flag) {
    if (!out_flag.empty()) return fs::path(out_flag);
    if (!cfg.export_dir.empty()) return fs::path(cfg.export_dir);
    return fs::path("runs") / cfg.name;
}

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

/// Apply "dotted.path=value" onto the config JSON, then reparse (so every
/// override goes through the same validation as a hand-written file).
dfl::ScenarioConfig override_by_path(const dfl::ScenarioConfig& cfg, const std::string& key,
                                     const std::string& value) {
    json root = json::parse(dfl::serialize_config(cfg));
    json* cursor = &root;
    std::string part;
    std::istringstream path(key);
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    if (parts.empty()) throw dfl::ConfigError("sweep: empty override key");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) cursor = &(*cursor)[parts[i]];
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // bare strings (e.g. topology kinds)
    }
    (*cursor)[parts.back()] = parsed;
    return dfl::parse_config(root.dump());
}

int cmd_validate(const std::string& config_path) {
    const auto cfg = dfl::parse_config(read_file(config_path));
    std::cout << "ok: " << cfg.name << " (seed " << cfg.seed << ", " << cfg.n_nodes << " nodes, "
              << cfg.rounds << " rounds)\n";
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_flag, const Overrides& ov) {
    auto cfg = apply_overrides(dfl::parse_config(read_file(config_path)), ov);
    const auto result = dfl::run_scenario(cfg);
    const auto dir = dfl::write_run_artifacts(cfg, result, resolve_out_dir(cfg, out_flag));
    const auto row = dfl::summarize_run(cfg.name, result);
    std::cout << "run " << cfg.name << ": " << result.rounds.size() << " rounds -> " << dir.string()
              << "\n";
    std::cout << "  final benign F1 " << dfl::format_number(row.final_benign_f1)
              << ", final attacker reputation "
              << dfl::format_number(row.final_attacker_reputation) << ", mean accepted "
              << dfl::format_number(row.mean_accepted_models) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis, const std::string& out_flag,
              const Overrides& ov) {
    const auto base = apply_overrides(dfl::parse_config(read_file(config_path)), ov);
    const auto eq = axis.find('=');

    std::vector<std::pair<std::string, dfl::ScenarioConfig>> runs;
    if (axis.empty()) {
        runs.emplace_back(base.name, base);
    } else {
        if (eq == std::string::npos)
            throw dfl::ConfigError("sweep: --axis expects key=v1,v2,...");
        const std::string key = axis.substr(0, eq);
        std::istringstream values(axis.substr(eq + 1));
        std::string v;
        while (std::getline(values, v, ',')) {
            auto cfg = override_by_path(base, key, v);
            cfg.name = base.name + "_" + sanitize(key) + "_" + sanitize(v);
            runs.emplace_back(cfg.name, cfg);
        }
        if (runs.empty()) runs.emplace_back(base.name, base);
    }

    const fs::path root = resolve_out_dir(base, out_flag);
    std::vector<dfl::SweepRow> rows;
    int failures = 0;
    for (auto& [name, cfg] : runs) {
        try {
            const auto result = dfl::run_scenario(cfg);
            dfl::write_run_artifacts(cfg, result, root / name);
            rows.push_back(dfl::summarize_run(name, result));
            std::cout << "sweep " << name << ": done\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cerr << "sweep " << name << ": failed: " << e.what() << "\n";
        }
    }
    std::error_code ec;
    fs::create_directories(root, ec);
    std::ofstream cmp(root / "comparison.csv", std::ios::binary);
    cmp << dfl::comparison_csv(rows);
    std::cout << "comparison -> " << (root / "comparison.csv").string() << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic DFL simulator with reputation-based attack mitigation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string axis;
    std::string reputation_flag;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("config", config_path, "scenario config (JSON)")->required();
        if (with_out) {
            cmd->add_option("--out", out_dir, "output directory");
            cmd->add_option("--seed", seed, "override the config seed");
            cmd->add_option("--reputation", reputation_flag, "override reputation engine: on|off")
                ->check(CLI::IsMember({"on", "off"}));
        }
    };

    auto* validate = app.add_subcommand("validate", "parse and validate a config");
    add_common(validate, false);
    auto* run = app.add_subcommand("run", "run one scenario and export artifacts");
    add_common(run, true);
    auto* sweep = app.add_subcommand("sweep", "run a scenario per axis value");
    add_common(sweep, true);
    sweep->add_option("--axis", axis, "override axis, e.g. attack.attacker_fraction=0.3,0.4");

    CLI11_PARSE(app, argc, argv);

    Overrides ov;
    ov.seed = seed;
    if (!reputation_flag.empty()) ov.reputation_enabled = reputation_flag == "on";

    try {
        if (validate->parsed()) return cmd_validate(config_path);
        if (run->parsed()) return cmd_run(config_path, out_dir, ov);
        if (sweep->parsed()) return cmd_sweep(config_path, axis, out_dir, ov);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
