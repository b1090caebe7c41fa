#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "parl/evaluation.hpp"
#include "parl/training.hpp"

namespace parl {

struct SamplingComparisonRow {
    std::string scheme;
    double mean_step_reward = 0.0;
    double per_step_train_seconds = 0.0;
};

// Trains PARL twice under paired seeds (quantile vs random sampling) and
// evaluates both policies on shared evaluation seeds.
std::vector<SamplingComparisonRow> compare_sampling(const NetworkConfig& cfg,
                                                    const ParlHyper& hyper, std::uint64_t seed,
                                                    const EvalOptions& eval);

// Runs a declarative experiment spec (section/key-value file naming the
// environment, method, hyperparameters and seeds) and writes the config
// snapshot, learning curve / heuristic parameters, eval CSV and demand
// trace into the output directory. Returns the process exit code.
int run_experiment(const std::string& spec_path, const std::string& out_override,
                   std::ostream& log);

}  // namespace parl
