#pragma once
#include <string>
#include <vector>

#include "wct/discretize.hpp"
#include "wct/estimate.hpp"
#include "wct/io.hpp"
#include "wct/wcopt.hpp"

namespace wct {

/// Full run configuration for the end-to-end pipeline. Serialized into every
/// report so a run can be reproduced from its output alone.
struct RunConfig {
  RewardConfig reward;
  DiscretizeConfig disc;
  StoppingRule stopping;
  std::vector<double> ks{0.0};
  Direction direction = Direction::minimize;
  std::string reference_path;  // optional scores.json with real-world ranking
  std::string output_path;
  std::vector<std::string> inputs;

  void validate() const;
};

/// Flat key=value config document; '#' starts a comment. Unknown keys are
/// rejected. Values set on the command line override file values.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
ordered_json config_to_json(const RunConfig& config);

/// Per policy: empirical distribution, direct estimate with RHW status, and
/// the worst-case curve; across policies: ranking per k and SCC against the
/// reference when provided. Returns the full JSON report.
ordered_json cmd_pipeline(const RunConfig& config);

/// CSV rendering of a (k, scc) sweep: header "k,scc", one row per k.
std::string sweep_to_csv(const std::vector<std::pair<double, double>>& sweep);

}  // namespace wct
