#include "dfl/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dfl/errors.hpp"

namespace dfl {

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string detail_csv(const SimulationResult& res) {
    std::ostringstream out;
    out << kDetailHeader << "\n";
    for (const auto& log : res.rounds) {
        for (std::size_t node = 0; node < log.nodes.size(); ++node) {
            for (const auto& [nb, row] : log.nodes[node].per_neighbor) {
                out << log.round << ',' << node_label(static_cast<NodeId>(node)) << ','
                    << node_label(nb) << ',' << format_number(row.metrics.similarity) << ','
                    << format_number(row.metrics.fraction) << ','
                    << format_number(row.metrics.latency) << ','
                    << format_number(row.metrics.messages) << ','
                    << format_number(row.weights.similarity) << ','
                    << format_number(row.weights.fraction) << ','
                    << format_number(row.weights.latency) << ','
                    << format_number(row.weights.messages) << ',' << format_number(row.score)
                    << ',' << format_number(row.reputation) << ',' << (row.accepted ? 1 : 0)
                    << "\n";
            }
        }
    }
    return out.str();
}

std::string summary_csv(const SimulationResult& res) {
    std::ostringstream out;
    out << kSummaryHeader << "\n";
    for (const auto& log : res.rounds) {
        for (std::size_t node = 0; node < log.nodes.size(); ++node) {
            const auto& n = log.nodes[node];
            out << log.round << ',' << node_label(static_cast<NodeId>(node)) << ','
                << (res.is_attacker[node] ? 1 : 0) << ',' << format_number(n.f1) << ','
                << format_number(n.loss) << ',' << n.accepted_models << ',' << n.cost_units
                << "\n";
        }
    }
    return out.str();
}

std::string content_hash(const std::string& content) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::filesystem::path write_run_artifacts(const ScenarioConfig& cfg, const SimulationResult& res,
                                          const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("export: cannot create " + out_dir.string());

    const std::string detail = detail_csv(res);
    const std::string summary = summary_csv(res);

    auto write_file = [&](const std::filesystem::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("export: cannot write " + p.string());
        out << content;
    };
    write_file(out_dir / "detail.csv", detail);
    write_file(out_dir / "summary.csv", summary);

    nlohmann::json manifest;
    manifest["tool"] = "dflsim";
    manifest["version"] = kToolVersion;
    manifest["name"] = cfg.name;
    manifest["seed"] = cfg.seed;
    manifest["config"] = nlohmann::json::parse(serialize_config(cfg));
    manifest["artifacts"] = {{"detail.csv", content_hash(detail)},
                             {"summary.csv", content_hash(summary)}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return out_dir;
}

SweepRow summarize_run(const std::string& scenario, const SimulationResult& res) {
    SweepRow row;
    row.scenario = scenario;
    if (!res.rounds.empty()) {
        const int last = static_cast<int>(res.rounds.size()) - 1;
        row.final_benign_f1 = res.mean_benign_f1(last);
        row.final_attacker_reputation = res.mean_reputation(last, true);
        double accepted = 0.0;
        for (int r = 0; r <= last; ++r) accepted += res.mean_benign_accepted(r);
        row.mean_accepted_models = accepted / static_cast<double>(last + 1);
    }
    return row;
}

std::string comparison_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kComparisonHeader << "\n";
    for (const auto& row : rows) {
        out << row.scenario << ',' << format_number(row.final_benign_f1) << ','
            << format_number(row.final_attacker_reputation) << ','
            << format_number(row.mean_accepted_models) << "\n";
    }
    return out.str();
}

}  // namespace dfl
