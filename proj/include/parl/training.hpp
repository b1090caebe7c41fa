#pragma once

#include <iosfwd>
#include <string>

#include "parl/policy.hpp"
#include "parl/relu_net.hpp"

namespace parl {

struct TrajectoryStep {
    std::vector<double> state;  // flattened state before the action
    Action action;
    double reward = 0.0;
    bool explored = false;  // epsilon-random step
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    std::vector<double> final_state;
    int infeasible_warnings = 0;  // policy proposals that needed scaling
};

// Plays `policy` for T steps from reset(cfg, seed); with probability
// epsilon a uniformly random action is taken instead and flagged.
Trajectory rollout(const NetworkConfig& cfg, Policy& policy, int steps, double epsilon,
                   std::uint64_t seed);

// Discounted suffix sums R_t = r_t + gamma R_{t+1}.
std::vector<double> compute_returns(const std::vector<double>& rewards, double gamma);

struct ParlHyper {
    double gamma = 0.75;
    int eta = 3;
    double epsilon = 0.1;
    int steps_per_rollout = 256;   // T
    int rollouts_per_iteration = 8;  // N
    int iterations = 10;
    SamplingScheme scheme = SamplingScheme::Quantile;
    QuantileWeights quantile_weights = QuantileWeights::DensityAtLevel;
    std::vector<int> hidden_layers = {16, 16};
    FitOptions fit{1e-3, 64, 200, 0};
    SolverChoice solver = SolverChoice::Auto;
    long long enumeration_cap = 1000000;
    double solve_time_limit = 60.0;
    int parallelism = 8;
};

struct IterationStats {
    int iteration = 0;
    long env_steps = 0;       // cumulative environment steps consumed
    double mean_step_reward = 0.0;
    double median_step_reward = 0.0;
    double std_step_reward = 0.0;
    double fit_loss = 0.0;    // final critic MSE
    double seconds = 0.0;     // wall time of the iteration
};

struct ParlResult {
    ReluNet net;
    std::vector<IterationStats> curve;
    GreedyPolicyConfig policy_config;  // for building the final policy
};

// Algorithm: iterate { N rollouts under the previous policy (random in
// iteration 1) -> fit a fresh critic on all (state, return) pairs ->
// greedy MIP policy w.r.t. the new critic }. Writes per-iteration critic
// checkpoints and a learning-curve CSV into out_dir when given.
ParlResult parl_train(const NetworkConfig& cfg, const ParlHyper& hyper, std::uint64_t seed,
                      const std::string& out_dir = "", std::ostream* log = nullptr);

std::unique_ptr<Policy> make_parl_policy(const NetworkConfig& cfg, const ParlResult& trained,
                                         std::uint64_t seed);

// Runs fn(0..count-1) on up to `workers` threads; exceptions rethrown.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace parl
