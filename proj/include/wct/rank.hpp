#pragma once
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wct/core.hpp"

namespace wct {

struct PolicyScore {
  std::string policy_id;
  double indicator = 0.0;
};

enum class SortOrder { ascending, descending };

/// Deterministic ranking: sort by indicator, ties broken by policy id.
std::vector<std::string> rank_policies(std::vector<PolicyScore> scores,
                                       SortOrder order);

/// Fractional (average) ranks, 1-based; ties share the mean of their ranks.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Spearman's rank correlation: Pearson correlation of the rank vectors.
/// Throws UndefinedCorrelationError for n < 2 or zero rank variance.
double spearman(std::span<const double> ref_scores,
                std::span<const double> cand_scores);

struct RankReport {
  std::vector<std::string> reference;
  std::vector<std::string> candidate;
  double scc = 0.0;
  std::vector<std::pair<double, double>> per_k;  // optional (k, scc) sweep
};

/// SCC between the reference scores and worst-case values at each k.
/// All curves must share the same k grid and the reference policy set.
std::vector<std::pair<double, double>> scc_sweep(
    const std::vector<PolicyScore>& reference,
    const std::map<std::string, std::vector<std::pair<double, double>>>&
        per_policy_curves);

}  // namespace wct
