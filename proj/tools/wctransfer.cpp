#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "wct/discretize.hpp"
#include "wct/estimate.hpp"
#include "wct/io.hpp"
#include "wct/pipeline.hpp"
#include "wct/rank.hpp"
#include "wct/synth.hpp"
#include "wct/wcopt.hpp"

namespace {

using wct::ordered_json;

void emit(const ordered_json& j, const std::string& out_path) {
  const std::string text = wct::dump_json17(j);
  if (out_path.empty())
    std::cout << text;
  else
    wct::write_file(out_path, text);
}

wct::Direction parse_direction(const std::string& s) {
  if (s == "max") return wct::Direction::maximize;
  if (s == "min") return wct::Direction::minimize;
  throw wct::ConfigError("direction must be max|min");
}

std::vector<double> load_psi(const std::string& psi_arg,
                             const wct::DiscreteDistribution& dist) {
  if (psi_arg == "coords") {
    if (!dist.support().empty() && dist.support()[0].coords.size() != 1)
      throw wct::InputError("--psi coords needs a 1-D support");
    std::vector<double> psi;
    psi.reserve(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i)
      psi.push_back(dist.point_values(i)[0]);
    return psi;
  }
  return ordered_json::parse(wct::read_file(psi_arg)).get<std::vector<double>>();
}

int run(int argc, char** argv) {
  CLI::App app{
      "Worst-case performance transference: predict real-world policy "
      "rankings from simulator evaluation logs"};
  app.require_subcommand(1);

  // ---- ingest ----
  auto* ingest = app.add_subcommand(
      "ingest", "Discretize evaluation logs into empirical distributions");
  std::vector<std::string> in_logs;
  std::string in_reward, in_out;
  int in_decimals = 2;
  std::string in_space = "reward_scalar";
  std::size_t in_burn = 0;
  ingest->add_option("logs", in_logs, "JSONL or CSV log files")->required();
  ingest->add_option("--reward", in_reward, "reward config JSON")->required();
  ingest->add_option("--decimals", in_decimals, "decimal places");
  ingest->add_option("--space", in_space, "reward_scalar|reward_terms");
  ingest->add_option("--burn-in", in_burn, "steps skipped per episode");
  ingest->add_option("-o,--out", in_out, "output path (default stdout)");

  // ---- estimate ----
  auto* estimate = app.add_subcommand(
      "estimate", "Monte-Carlo reward estimate with RHW stopping");
  std::string est_log, est_reward, est_out;
  wct::StoppingRule est_rule;
  estimate->add_option("log", est_log, "JSONL or CSV log file")->required();
  estimate->add_option("--reward", est_reward, "reward config JSON")->required();
  estimate->add_option("--confidence", est_rule.confidence, "c in (0,1)");
  estimate->add_option("--rhw", est_rule.rhw_threshold, "RHW threshold s_r");
  estimate->add_option("--min-samples", est_rule.min_samples, "");
  estimate->add_option("--max-samples", est_rule.max_samples, "");
  estimate->add_option("-o,--out", est_out, "output path (default stdout)");

  // ---- worst-case ----
  auto* wc = app.add_subcommand(
      "worst-case", "Solve the divergence-constrained worst-case expectation");
  std::string wc_dist, wc_psi = "coords", wc_dir = "max", wc_out;
  std::vector<double> wc_ks;
  wc->add_option("--dist", wc_dist, "serialized distribution JSON")->required();
  wc->add_option("--psi", wc_psi, "'coords' or a JSON file of metric values");
  wc->add_option("--k", wc_ks, "divergence budget (repeatable)")->required();
  wc->add_option("--direction", wc_dir, "max|min");
  wc->add_option("-o,--out", wc_out, "output path (default stdout)");

  // ---- rank ----
  auto* rank = app.add_subcommand(
      "rank", "Rank agreement (SCC) between reference and candidate scores");
  std::string rk_ref, rk_cand, rk_csv, rk_out;
  rank->add_option("--reference", rk_ref, "reference scores JSON")->required();
  rank->add_option("--candidate", rk_cand, "candidate scores or curves JSON")
      ->required();
  rank->add_option("--csv", rk_csv, "write (k, scc) sweep CSV here");
  rank->add_option("-o,--out", rk_out, "output path (default stdout)");

  // ---- sweep ----
  auto* sweep = app.add_subcommand(
      "sweep", "Worst-case value across a grid of divergence budgets");
  std::string sw_dist, sw_psi = "coords", sw_dir = "max", sw_csv, sw_out;
  std::vector<double> sw_ks;
  sweep->add_option("--dist", sw_dist, "serialized distribution JSON")->required();
  sweep->add_option("--psi", sw_psi, "'coords' or a JSON file of metric values");
  sweep->add_option("--k", sw_ks, "divergence budgets")->required();
  sweep->add_option("--direction", sw_dir, "max|min");
  sweep->add_option("--csv", sw_csv, "write (k, value) CSV here");
  sweep->add_option("-o,--out", sw_out, "output path (default stdout)");

  // ---- synth-validate ----
  auto* synth = app.add_subcommand(
      "synth-validate",
      "Ranking-robustness experiment on synthetic ensembles");
  wct::EnsembleConfig ens;
  std::string sv_dir = "min", sv_csv, sv_out;
  synth->add_option("--pairs", ens.n_pairs, "number of distribution pairs");
  synth->add_option("--support", ens.support_size, "support size");
  synth->add_option("--gap", ens.gap, "enforced expectation gap");
  synth->add_option("--noise", ens.noise,
                    "perturbation concentration (0 disables)");
  synth->add_option("--k", ens.k, "divergence budget");
  synth->add_option("--seed", ens.seed, "RNG seed");
  synth->add_option("--direction", sv_dir, "max|min");
  synth->add_option("--csv", sv_csv, "write per-pair outcomes CSV here");
  synth->add_option("-o,--out", sv_out, "output path (default stdout)");

  // ---- pipeline ----
  auto* pipeline = app.add_subcommand(
      "pipeline", "End-to-end: ingest, estimate, worst-case curves, ranking");
  std::string pl_config, pl_out;
  std::vector<std::string> pl_logs;
  pipeline->add_option("--config", pl_config, "flat key=value config file")
      ->required();
  pipeline->add_option("logs", pl_logs, "JSONL or CSV log files")->required();
  pipeline->add_option("-o,--out", pl_out, "override configured output path");

  CLI11_PARSE(app, argc, argv);

  if (*ingest) {
    const auto reward = wct::load_reward(in_reward);
    wct::DiscretizeConfig disc;
    disc.decimals = in_decimals;
    disc.space = in_space == "reward_terms" ? wct::StateSpace::reward_terms
                                            : wct::StateSpace::reward_scalar;
    disc.burn_in = in_burn;
    std::vector<wct::EvalLog> logs;
    for (const auto& path : in_logs) {
      auto parsed = wct::load_logs(path);
      for (auto& log : parsed) logs.push_back(std::move(log));
    }
    logs = wct::merge_logs(std::move(logs));
    ordered_json out = ordered_json::array();
    for (const auto& log : logs) {
      auto [dist, psi] = wct::empirical_distribution(log, reward, disc);
      ordered_json entry;
      entry["policy"] = log.policy_id;
      entry["dist"] = wct::dist_to_json(dist);
      entry["psi"] = psi.values;
      out.push_back(std::move(entry));
    }
    emit(out, in_out);
  } else if (*estimate) {
    const auto reward = wct::load_reward(est_reward);
    auto logs = wct::merge_logs(wct::load_logs(est_log));
    if (logs.size() != 1)
      throw wct::InputError("estimate expects a single-policy log");
    std::vector<double> rewards;
    for (const auto& episode : logs[0].episodes)
      for (const auto& step : episode)
        rewards.push_back(wct::reward_of_step(step, reward));
    est_rule.min_samples = std::min(est_rule.min_samples, rewards.size());
    emit(wct::estimate_to_json(wct::mc_estimate(rewards, est_rule)), est_out);
  } else if (*wc) {
    const auto dist = wct::load_distribution(wc_dist);
    wct::MetricVector psi{load_psi(wc_psi, dist)};
    const auto dir = parse_direction(wc_dir);
    ordered_json out = ordered_json::array();
    for (double k : wc_ks) {
      const auto sol = wct::solve_worst_case(dist, psi, k, dir);
      ordered_json entry;
      entry["k"] = k;
      entry["value"] = sol.value;
      entry["active"] = sol.active;
      entry["rho"] = sol.rho;
      out.push_back(std::move(entry));
    }
    emit(wc_ks.size() == 1 ? out[0] : out, wc_out);
  } else if (*rank) {
    const auto reference = wct::load_scores(rk_ref);
    const auto cand_json = ordered_json::parse(wct::read_file(rk_cand));
    wct::RankReport report;
    report.reference = wct::rank_policies(reference, wct::SortOrder::ascending);
    const bool is_curves =
        !cand_json.empty() && cand_json[0].contains("curve");
    if (is_curves) {
      const auto curves = wct::curves_from_json(cand_json);
      report.per_k = wct::scc_sweep(reference, curves);
      // Candidate order and headline SCC from the last (largest) k.
      std::vector<wct::PolicyScore> at_k;
      for (const auto& [policy, curve] : curves)
        at_k.push_back(wct::PolicyScore{policy, curve.back().second});
      report.candidate = wct::rank_policies(at_k, wct::SortOrder::ascending);
      report.scc = report.per_k.back().second;
      if (!rk_csv.empty())
        wct::write_file(rk_csv, wct::sweep_to_csv(report.per_k));
    } else {
      const auto candidate = wct::scores_from_json(cand_json);
      report.candidate = wct::rank_policies(candidate, wct::SortOrder::ascending);
      std::vector<double> ref_scores, cand_scores;
      std::map<std::string, double> by_id;
      for (const auto& s : candidate) by_id[s.policy_id] = s.indicator;
      for (const auto& s : reference) {
        auto it = by_id.find(s.policy_id);
        if (it == by_id.end())
          throw wct::InputError("rank: candidate missing policy " + s.policy_id);
        ref_scores.push_back(s.indicator);
        cand_scores.push_back(it->second);
      }
      report.scc = wct::spearman(ref_scores, cand_scores);
    }
    emit(wct::rank_report_to_json(report), rk_out);
  } else if (*sweep) {
    const auto dist = wct::load_distribution(sw_dist);
    wct::MetricVector psi{load_psi(sw_psi, dist)};
    const auto curve =
        wct::worst_case_curve(dist, psi, sw_ks, parse_direction(sw_dir));
    ordered_json out = ordered_json::array();
    for (const auto& [k, value] : curve) {
      ordered_json entry;
      entry["k"] = k;
      entry["value"] = value;
      out.push_back(std::move(entry));
    }
    if (!sw_csv.empty()) {
      std::string csv = "k,value\n";
      for (const auto& [k, value] : curve)
        csv += wct::format_double(k) + "," + wct::format_double(value) + "\n";
      wct::write_file(sw_csv, csv);
    }
    emit(out, sw_out);
  } else if (*synth) {
    ens.direction = parse_direction(sv_dir);
    std::vector<wct::PairOutcome> outcomes;
    const auto result = wct::run_theorem1_experiment(ens, &outcomes);
    if (!sv_csv.empty()) {
      std::string csv = "pair,q_correct,rho_correct,var_q,var_rho\n";
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        csv += std::to_string(i) + "," +
               std::to_string(outcomes[i].q_correct ? 1 : 0) + "," +
               std::to_string(outcomes[i].rho_correct ? 1 : 0) + "," +
               wct::format_double(outcomes[i].var_q) + "," +
               wct::format_double(outcomes[i].var_rho) + "\n";
      }
      wct::write_file(sv_csv, csv);
    }
    ordered_json out;
    out["p_correct_q"] = result.p_correct_q;
    out["p_correct_rho"] = result.p_correct_rho;
    out["n_pairs"] = result.n_pairs;
    out["mean_var_q"] = result.mean_var_q;
    out["mean_var_rho"] = result.mean_var_rho;
    emit(out, sv_out);
  } else if (*pipeline) {
    wct::RunConfig config = wct::load_config(pl_config);
    config.inputs = pl_logs;
    if (!pl_out.empty()) config.output_path = pl_out;
    const auto report = wct::cmd_pipeline(config);
    emit(report, config.output_path);
    if (report.contains("ranking") && report["ranking"].contains("scc_per_k") &&
        !config.output_path.empty()) {
      std::vector<std::pair<double, double>> sweep_data;
      for (const auto& entry : report["ranking"]["scc_per_k"])
        sweep_data.emplace_back(entry["k"].get<double>(),
                                entry["scc"].get<double>());
      wct::write_file(config.output_path + ".scc.csv",
                      wct::sweep_to_csv(sweep_data));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const wct::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const wct::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
