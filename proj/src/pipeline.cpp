#include "wct/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "wct/rank.hpp"

namespace wct {

void RunConfig::validate() const {
  reward.validate();
  disc.validate();
  stopping.validate();
  if (ks.empty()) throw ConfigError("RunConfig: ks must be non-empty");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 0.0) throw ConfigError("RunConfig: ks must be non-negative");
    if (i > 0 && ks[i] < ks[i - 1])
      throw ConfigError("RunConfig: ks must be sorted ascending");
  }
  if (inputs.empty()) throw ConfigError("RunConfig: no input logs");
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": " + v);
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto nb = line.find_first_not_of(" \t\r");
    if (nb == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line is not key = value", lineno);
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));

    if (key == "decimals") {
      config.disc.decimals = static_cast<int>(to_double(key, value));
    } else if (key == "space") {
      if (value == "reward_scalar")
        config.disc.space = StateSpace::reward_scalar;
      else if (value == "reward_terms")
        config.disc.space = StateSpace::reward_terms;
      else
        throw ConfigError("config: space must be reward_scalar|reward_terms");
    } else if (key == "burn_in") {
      config.disc.burn_in = static_cast<std::size_t>(to_double(key, value));
    } else if (key == "confidence") {
      config.stopping.confidence = to_double(key, value);
    } else if (key == "rhw_threshold") {
      config.stopping.rhw_threshold = to_double(key, value);
    } else if (key == "min_samples") {
      config.stopping.min_samples = static_cast<std::size_t>(to_double(key, value));
    } else if (key == "max_samples") {
      config.stopping.max_samples = static_cast<std::size_t>(to_double(key, value));
    } else if (key == "ks") {
      config.ks.clear();
      for (const auto& cell : split_commas(value))
        config.ks.push_back(to_double(key, cell));
    } else if (key == "direction") {
      if (value == "max")
        config.direction = Direction::maximize;
      else if (value == "min")
        config.direction = Direction::minimize;
      else
        throw ConfigError("config: direction must be max|min");
    } else if (key == "reward_terms") {
      config.reward.term_names = split_commas(value);
    } else if (key == "reward_weights") {
      config.reward.weights.clear();
      for (const auto& cell : split_commas(value))
        config.reward.weights.push_back(to_double(key, cell));
    } else if (key == "reward_mask") {
      config.reward.mask.clear();
      for (const auto& cell : split_commas(value)) {
        if (cell == "true" || cell == "1")
          config.reward.mask.push_back(true);
        else if (cell == "false" || cell == "0")
          config.reward.mask.push_back(false);
        else
          throw ConfigError("config: reward_mask entries must be true|false");
      }
    } else if (key == "reference") {
      config.reference_path = value;
    } else if (key == "output") {
      config.output_path = value;
    } else {
      throw ConfigError("config: unknown key " + key);
    }
  }
  if (config.reward.mask.empty())
    config.reward.mask.assign(config.reward.term_names.size(), true);
  return config;
}

RunConfig load_config(const std::string& path) {
  return parse_config_text(read_file(path));
}

ordered_json config_to_json(const RunConfig& config) {
  ordered_json j;
  j["reward"] = reward_to_json(config.reward);
  j["decimals"] = config.disc.decimals;
  j["space"] = config.disc.space == StateSpace::reward_scalar ? "reward_scalar"
                                                              : "reward_terms";
  j["burn_in"] = config.disc.burn_in;
  j["confidence"] = config.stopping.confidence;
  j["rhw_threshold"] = config.stopping.rhw_threshold;
  j["min_samples"] = config.stopping.min_samples;
  j["max_samples"] = config.stopping.max_samples;
  j["ks"] = config.ks;
  j["direction"] = config.direction == Direction::maximize ? "max" : "min";
  j["reference"] = config.reference_path;
  j["inputs"] = config.inputs;
  return j;
}

ordered_json cmd_pipeline(const RunConfig& config) {
  config.validate();

  std::vector<EvalLog> logs;
  for (const auto& path : config.inputs) {
    auto parsed = load_logs(path);
    for (auto& log : parsed) logs.push_back(std::move(log));
  }
  logs = merge_logs(std::move(logs));  // sorted by policy id
  if (logs.empty()) throw InputError("pipeline: no policies in input logs");

  ordered_json report;
  report["config"] = config_to_json(config);

  std::vector<PolicyScore> direct_scores;
  std::map<std::string, std::vector<std::pair<double, double>>> curves;

  ordered_json policies = ordered_json::array();
  for (const auto& log : logs) {
    log.validate(config.reward.n_terms());
    auto [dist, psi] = empirical_distribution(log, config.reward, config.disc);
    const double direct = expectation(dist, psi);

    // RHW status of the plain per-step reward stream.
    std::vector<double> rewards;
    rewards.reserve(log.n_steps());
    for (const auto& episode : log.episodes) {
      for (std::size_t t = config.disc.burn_in; t < episode.size(); ++t)
        rewards.push_back(reward_of_step(episode[t], config.reward));
    }
    StoppingRule rule = config.stopping;
    rule.min_samples = std::min(rule.min_samples, rewards.size());
    rule.max_samples = std::min(rule.max_samples, rewards.size());
    const EstimateResult est = mc_estimate(rewards, rule);

    const auto curve = worst_case_curve(dist, psi, config.ks, config.direction);

    ordered_json entry;
    entry["policy"] = log.policy_id;
    entry["n_steps"] = rewards.size();
    entry["distribution"] = dist_to_json(dist);
    entry["direct"] = direct;
    entry["estimate"] = estimate_to_json(est);
    ordered_json jc = ordered_json::array();
    for (const auto& [k, value] : curve)
      jc.push_back(ordered_json::array({k, value}));
    entry["curve"] = std::move(jc);
    policies.push_back(std::move(entry));

    direct_scores.push_back(PolicyScore{log.policy_id, direct});
    curves[log.policy_id] = curve;
  }
  report["policies"] = std::move(policies);

  if (logs.size() >= 2) {
    ordered_json ranking;
    ordered_json per_k = ordered_json::array();
    std::vector<PolicyScore> reference;
    if (!config.reference_path.empty())
      reference = load_scores(config.reference_path);
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki) {
      std::vector<PolicyScore> at_k;
      for (const auto& s : direct_scores)
        at_k.push_back(PolicyScore{s.policy_id, curves[s.policy_id][ki].second});
      ordered_json entry;
      entry["k"] = config.ks[ki];
      entry["order"] = rank_policies(at_k, SortOrder::ascending);
      per_k.push_back(std::move(entry));
    }
    ranking["per_k"] = std::move(per_k);
    ranking["direct_order"] = rank_policies(direct_scores, SortOrder::ascending);
    if (!reference.empty()) {
      const auto sweep = scc_sweep(reference, curves);
      ordered_json jsweep = ordered_json::array();
      for (const auto& [k, scc] : sweep) {
        ordered_json entry;
        entry["k"] = k;
        entry["scc"] = scc;
        jsweep.push_back(std::move(entry));
      }
      ranking["scc_per_k"] = std::move(jsweep);
      ranking["reference_order"] =
          rank_policies(reference, SortOrder::ascending);
    }
    report["ranking"] = std::move(ranking);
  }
  return report;
}

std::string sweep_to_csv(const std::vector<std::pair<double, double>>& sweep) {
  std::string out = "k,scc\n";
  for (const auto& [k, scc] : sweep)
    out += format_double(k) + "," + format_double(scc) + "\n";
  return out;
}

}  // namespace wct
