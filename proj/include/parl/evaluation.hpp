#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "parl/policy.hpp"

namespace parl {

struct EvalOptions {
    int runs = 10;
    int episodes = 20;
    int steps = 256;
    std::uint64_t base_seed = 1;
    int parallelism = 8;
    // When set, every realized demand (node order, step order) is appended;
    // traces depend only on the seeds, so paired policies share them.
    std::vector<long long>* demand_log = nullptr;
};

struct RunStat {
    int run = 0;
    bool failed = false;
    double mean_step_reward = 0.0;
    double revenue = 0.0;       // per-step averages
    double ordering_cost = 0.0;
    double holding_cost = 0.0;
};

struct EvalReport {
    std::string policy;
    std::vector<RunStat> runs;
    int failed_runs = 0;
    double mean = 0.0;    // over successful runs' mean rewards
    double median = 0.0;
    double stddev = 0.0;
    double revenue = 0.0;
    double ordering_cost = 0.0;
    double holding_cost = 0.0;
};

// runs x episodes x steps deterministic-given-seed evaluation. A policy
// exception marks the run failed and excludes it from the aggregates.
EvalReport run_evaluation(const PolicyFactory& factory, const NetworkConfig& cfg,
                          const EvalOptions& opt);

void write_eval_csv(std::ostream& out, const EvalReport& report);
EvalReport read_eval_csv(std::istream& in);

}  // namespace parl
