#pragma once
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wct/core.hpp"
#include "wct/rank.hpp"

namespace wct {

using ordered_json = nlohmann::ordered_json;

/// Serialize JSON with all floating-point numbers printed to 17 significant
/// digits so reports are byte-reproducible.
std::string dump_json17(const ordered_json& j, int indent = 2);

/// Parse evaluation logs. JSONL: one {"policy","episode","step","r"} object
/// per line. CSV: header policy,episode,step,<term names...>. Both formats
/// produce identical EvalLog structures. Steps are ordered by (episode, step)
/// per policy; policies are returned sorted by id.
std::vector<EvalLog> parse_logs_jsonl(std::istream& in);
std::vector<EvalLog> parse_logs_csv(std::istream& in);
std::vector<EvalLog> load_logs(const std::string& path);

/// Merge logs with the same policy id (shards of one campaign).
std::vector<EvalLog> merge_logs(std::vector<EvalLog> logs);

// Canonical distribution serialization:
// {"decimals": d, "support": [[ints]], "probs": [floats]} with sorted support.
ordered_json dist_to_json(const DiscreteDistribution& dist);
DiscreteDistribution dist_from_json(const ordered_json& j);
DiscreteDistribution load_distribution(const std::string& path);

ordered_json reward_to_json(const RewardConfig& reward);
RewardConfig reward_from_json(const ordered_json& j);
RewardConfig load_reward(const std::string& path);

ordered_json estimate_to_json(const EstimateResult& r);

// Scores: [{"policy": id, "score": value}, ...]
std::vector<PolicyScore> scores_from_json(const ordered_json& j);
std::vector<PolicyScore> load_scores(const std::string& path);
ordered_json scores_to_json(const std::vector<PolicyScore>& scores);

// Curves: [{"policy": id, "curve": [[k, value], ...]}, ...]
std::map<std::string, std::vector<std::pair<double, double>>> curves_from_json(
    const ordered_json& j);

ordered_json rank_report_to_json(const RankReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// "%.17g" rendering used everywhere a float reaches an output file.
std::string format_double(double v);

}  // namespace wct
