#include "wct/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace wct {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw NumericalError("format_double: non-finite value");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void dump_rec(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + ordered_json(key).dump() + ": ";
        dump_rec(value, out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(value, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json17(const ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

std::vector<EvalLog> parse_logs_jsonl(std::istream& in) {
  std::map<std::string, std::map<long long, std::map<long long, std::vector<double>>>>
      table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.contains("policy") || !j.contains("episode") || !j.contains("step") ||
        !j.contains("r"))
      throw ParseError("step object needs policy/episode/step/r", lineno);
    try {
      auto& slot = table[j["policy"].get<std::string>()]
                        [j["episode"].get<long long>()]
                        [j["step"].get<long long>()];
      slot = j["r"].get<std::vector<double>>();
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad field type: ") + e.what(), lineno);
    }
  }
  std::vector<EvalLog> logs;
  for (auto& [policy, episodes] : table) {
    EvalLog log{policy, {}};
    for (auto& [ep, steps] : episodes) {
      std::vector<std::vector<double>> episode;
      episode.reserve(steps.size());
      for (auto& [st, features] : steps) episode.push_back(std::move(features));
      log.episodes.push_back(std::move(episode));
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

std::vector<EvalLog> parse_logs_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw ParseError("empty CSV input", 1);
  ++lineno;
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
        cell.pop_back();
      header.push_back(cell);
    }
  }
  if (header.size() < 4 || header[0] != "policy" || header[1] != "episode" ||
      header[2] != "step")
    throw ParseError("CSV header must be policy,episode,step,<terms...>", 1);
  const std::size_t n_terms = header.size() - 3;

  std::map<std::string, std::map<long long, std::map<long long, std::vector<double>>>>
      table;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size())
      throw ParseError("CSV row has wrong column count", lineno);
    try {
      std::vector<double> features(n_terms);
      for (std::size_t i = 0; i < n_terms; ++i)
        features[i] = std::stod(cells[3 + i]);
      table[cells[0]][std::stoll(cells[1])][std::stoll(cells[2])] =
          std::move(features);
    } catch (const std::exception&) {
      throw ParseError("CSV row has a non-numeric field", lineno);
    }
  }
  std::vector<EvalLog> logs;
  for (auto& [policy, episodes] : table) {
    EvalLog log{policy, {}};
    for (auto& [ep, steps] : episodes) {
      std::vector<std::vector<double>> episode;
      episode.reserve(steps.size());
      for (auto& [st, features] : steps) episode.push_back(std::move(features));
      log.episodes.push_back(std::move(episode));
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

std::vector<EvalLog> load_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open log file: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return parse_logs_csv(in);
  return parse_logs_jsonl(in);
}

std::vector<EvalLog> merge_logs(std::vector<EvalLog> logs) {
  std::map<std::string, EvalLog> merged;
  for (auto& log : logs) {
    auto it = merged.find(log.policy_id);
    if (it == merged.end()) {
      merged.emplace(log.policy_id, std::move(log));
    } else {
      for (auto& ep : log.episodes)
        it->second.episodes.push_back(std::move(ep));
    }
  }
  std::vector<EvalLog> out;
  out.reserve(merged.size());
  for (auto& [id, log] : merged) out.push_back(std::move(log));
  return out;
}

ordered_json dist_to_json(const DiscreteDistribution& dist) {
  ordered_json j;
  j["decimals"] = dist.decimals();
  ordered_json support = ordered_json::array();
  for (const auto& point : dist.support()) support.push_back(point.coords);
  j["support"] = std::move(support);
  j["probs"] = dist.probs();
  return j;
}

DiscreteDistribution dist_from_json(const ordered_json& j) {
  try {
    const int decimals = j.at("decimals").get<int>();
    std::vector<SupportPoint> support;
    for (const auto& coords : j.at("support"))
      support.push_back(SupportPoint{coords.get<std::vector<std::int64_t>>()});
    auto probs = j.at("probs").get<std::vector<double>>();
    return DiscreteDistribution::from_sorted(decimals, std::move(support),
                                             std::move(probs));
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("bad distribution JSON: ") + e.what());
  }
}

DiscreteDistribution load_distribution(const std::string& path) {
  return dist_from_json(ordered_json::parse(read_file(path)));
}

ordered_json reward_to_json(const RewardConfig& reward) {
  ordered_json j;
  j["terms"] = reward.term_names;
  j["weights"] = reward.weights;
  ordered_json mask = ordered_json::array();
  for (bool m : reward.mask) mask.push_back(m);
  j["mask"] = std::move(mask);
  return j;
}

RewardConfig reward_from_json(const ordered_json& j) {
  RewardConfig reward;
  try {
    reward.term_names = j.at("terms").get<std::vector<std::string>>();
    reward.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("mask")) {
      for (const auto& m : j.at("mask")) reward.mask.push_back(m.get<bool>());
    } else {
      reward.mask.assign(reward.term_names.size(), true);
    }
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("bad reward JSON: ") + e.what());
  }
  reward.validate();
  return reward;
}

RewardConfig load_reward(const std::string& path) {
  return reward_from_json(ordered_json::parse(read_file(path)));
}

ordered_json estimate_to_json(const EstimateResult& r) {
  ordered_json j;
  j["mean"] = r.mean;
  j["half_width"] = r.half_width;
  if (r.rhw_defined)
    j["rhw"] = r.rhw;
  else
    j["rhw"] = nullptr;
  j["n"] = r.n_samples;
  j["converged"] = r.converged;
  return j;
}

std::vector<PolicyScore> scores_from_json(const ordered_json& j) {
  std::vector<PolicyScore> scores;
  try {
    for (const auto& entry : j) {
      scores.push_back(PolicyScore{entry.at("policy").get<std::string>(),
                                   entry.at("score").get<double>()});
    }
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("bad scores JSON: ") + e.what());
  }
  return scores;
}

std::vector<PolicyScore> load_scores(const std::string& path) {
  return scores_from_json(ordered_json::parse(read_file(path)));
}

ordered_json scores_to_json(const std::vector<PolicyScore>& scores) {
  ordered_json j = ordered_json::array();
  for (const auto& s : scores) {
    ordered_json entry;
    entry["policy"] = s.policy_id;
    entry["score"] = s.indicator;
    j.push_back(std::move(entry));
  }
  return j;
}

std::map<std::string, std::vector<std::pair<double, double>>> curves_from_json(
    const ordered_json& j) {
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  try {
    for (const auto& entry : j) {
      std::vector<std::pair<double, double>> curve;
      for (const auto& kv : entry.at("curve"))
        curve.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
      curves[entry.at("policy").get<std::string>()] = std::move(curve);
    }
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("bad curves JSON: ") + e.what());
  }
  return curves;
}

ordered_json rank_report_to_json(const RankReport& report) {
  ordered_json j;
  j["reference"] = report.reference;
  j["candidate"] = report.candidate;
  j["scc"] = report.scc;
  if (!report.per_k.empty()) {
    ordered_json per_k = ordered_json::array();
    for (const auto& [k, scc] : report.per_k) {
      ordered_json entry;
      entry["k"] = k;
      entry["scc"] = scc;
      per_k.push_back(std::move(entry));
    }
    j["per_k"] = std::move(per_k);
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

}  // namespace wct
