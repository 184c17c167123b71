#include "wct/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace wct {

std::vector<std::string> rank_policies(std::vector<PolicyScore> scores,
                                       SortOrder order) {
  std::set<std::string> seen;
  for (const auto& s : scores) {
    if (!std::isfinite(s.indicator))
      throw InputError("rank_policies: non-finite indicator");
    if (!seen.insert(s.policy_id).second)
      throw InputError("rank_policies: duplicate policy id " + s.policy_id);
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [order](const PolicyScore& a, const PolicyScore& b) {
                     if (a.indicator != b.indicator) {
                       return order == SortOrder::ascending
                                  ? a.indicator < b.indicator
                                  : a.indicator > b.indicator;
                     }
                     return a.policy_id < b.policy_id;
                   });
  std::vector<std::string> out;
  out.reserve(scores.size());
  for (auto& s : scores) out.push_back(std::move(s.policy_id));
  return out;
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> ref_scores,
                std::span<const double> cand_scores) {
  if (ref_scores.size() != cand_scores.size())
    throw DimensionError("spearman: length mismatch");
  const std::size_t n = ref_scores.size();
  if (n < 2) throw UndefinedCorrelationError("spearman: need at least 2 items");

  const auto r1 = fractional_ranks(ref_scores);
  const auto r2 = fractional_ranks(cand_scores);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double num = 0.0, d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = r1[i] - mean;
    const double b = r2[i] - mean;
    num += a * b;
    d1 += a * a;
    d2 += b * b;
  }
  if (d1 == 0.0 || d2 == 0.0)
    throw UndefinedCorrelationError("spearman: zero rank variance");
  return num / std::sqrt(d1 * d2);
}

std::vector<std::pair<double, double>> scc_sweep(
    const std::vector<PolicyScore>& reference,
    const std::map<std::string, std::vector<std::pair<double, double>>>&
        per_policy_curves) {
  if (reference.size() != per_policy_curves.size())
    throw InputError("scc_sweep: policy sets differ");
  const std::vector<std::pair<double, double>>* grid = nullptr;
  for (const auto& s : reference) {
    auto it = per_policy_curves.find(s.policy_id);
    if (it == per_policy_curves.end())
      throw InputError("scc_sweep: missing curve for policy " + s.policy_id);
    if (!grid) {
      grid = &it->second;
    } else if (grid->size() != it->second.size()) {
      throw InputError("scc_sweep: mismatched k grids");
    } else {
      for (std::size_t i = 0; i < grid->size(); ++i) {
        if ((*grid)[i].first != it->second[i].first)
          throw InputError("scc_sweep: mismatched k grids");
      }
    }
  }
  if (!grid || grid->empty()) throw InputError("scc_sweep: empty k grid");

  std::vector<double> ref_scores;
  ref_scores.reserve(reference.size());
  for (const auto& s : reference) ref_scores.push_back(s.indicator);

  std::vector<std::pair<double, double>> out;
  out.reserve(grid->size());
  for (std::size_t ki = 0; ki < grid->size(); ++ki) {
    std::vector<double> cand;
    cand.reserve(reference.size());
    for (const auto& s : reference)
      cand.push_back(per_policy_curves.at(s.policy_id)[ki].second);
    out.emplace_back((*grid)[ki].first, spearman(ref_scores, cand));
  }
  return out;
}

}  // namespace wct
