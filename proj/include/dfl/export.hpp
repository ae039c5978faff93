#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dfl/config.hpp"
#include "dfl/simulation.hpp"

namespace dfl {

constexpr const char* kToolVersion = "0.1.0";

constexpr const char* kDetailHeader =
    "round,node,neighbor,sim,frac,lat,msg,w_sim,w_frac,w_lat,w_msg,score,reputation,accepted";
constexpr const char* kSummaryHeader = "round,node,is_attacker,f1,loss,accepted_models,cost_units";
constexpr const char* kComparisonHeader =
    "scenario,final_benign_f1,final_attacker_reputation,mean_accepted_models";

/// Stable decimal rendering used in every export (%.10g).
std::string format_number(double v);

std::string detail_csv(const SimulationResult& res);
std::string summary_csv(const SimulationResult& res);

/// FNV-1a 64-bit content hash, rendered as "fnv1a64:<hex>".
std::string content_hash(const std::string& content);

/// Writes detail.csv, summary.csv and manifest.json; returns the directory.
std::filesystem::path write_run_artifacts(const ScenarioConfig& cfg, const SimulationResult& res,
                                          const std::filesystem::path& out_dir);

struct SweepRow {
    std::string scenario;
    double final_benign_f1 = 0.0;
    double final_attacker_reputation = 0.0;  // NaN when the run has no attackers
    double mean_accepted_models = 0.0;
};

SweepRow summarize_run(const std::string& scenario, const SimulationResult& res);
std::string comparison_csv(const std::vector<SweepRow>& rows);

}  // namespace dfl
