#pragma once

#include <iosfwd>
#include <vector>

#include "parl/config.hpp"
#include "parl/rng.hpp"

namespace parl {

// Per-node inventory pipeline plus retailer backlog; the MDP state.
struct PipelineState {
    // pipe[n][j] = units arriving in j periods (j = 0 is on-hand).
    std::vector<std::vector<double>> pipe;
    std::vector<double> backlog;  // per node; nonzero only for backorder retailers
    int period = 0;

    double on_hand(int node) const { return pipe[node].empty() ? 0.0 : pipe[node][0]; }
};

// Trans-shipment decision, one quantity per link (config order).
struct Action {
    std::vector<int> qty;

    static Action zeros(size_t links) {
        Action a;
        a.qty.assign(links, 0);
        return a;
    }
    bool operator==(const Action&) const = default;
};

// One realization of the uncertainty: demand per retailer, production
// per supplier. Values are nonnegative integers.
struct Realization {
    std::vector<long long> demand;      // per node, 0 when not a retailer
    std::vector<long long> production;  // per node, 0 when not a supplier
};

struct NodeReward {
    double revenue = 0.0;        // rs
    double transship_cost = 0.0; // tsc
    double holding_cost = 0.0;   // hsc: holding + spillage (+ backorder penalty)
};

struct RewardBreakdown {
    std::vector<NodeReward> per_node;
    double total = 0.0;  // sum of rs - tsc - hsc
};

struct StepResult {
    PipelineState state;
    RewardBreakdown reward;
};

// Draws every pipeline slot i.i.d. from the initial inventory
// distribution; period 0; deterministic given the seed.
PipelineState reset(const NetworkConfig& cfg, std::uint64_t seed);

// Demand = round(max(0, draw)), production likewise.
Realization sample_uncertainty(const NetworkConfig& cfg, Rng& rng);

// Scales each source node's outgoing requests down to its on-hand
// inventory, integerized by largest remainder so the shipped total
// equals what is available.
Action apply_proportional_fulfillment(const NetworkConfig& cfg, const PipelineState& state,
                                      const Action& requested);

bool action_supply_feasible(const NetworkConfig& cfg, const PipelineState& state,
                            const Action& action);

// Advances one period. The action must already be fulfillment-feasible
// (throws std::invalid_argument otherwise).
StepResult step(const NetworkConfig& cfg, const PipelineState& state, const Action& action,
                const Realization& real);

// On-hand plus the first `horizon` pipeline slots, minus backlog.
double inventory_position(const NetworkConfig& cfg, const PipelineState& state, int node,
                          int horizon);

// Flattened state vector in config.state_dims order (critic input).
std::vector<double> state_to_vector(const NetworkConfig& cfg, const PipelineState& state);
PipelineState state_from_vector(const NetworkConfig& cfg, const std::vector<double>& v,
                                int period = 0);

// Trajectory log rows: period,node,on_hand,pipeline,backlog,orders,demand,rs,tsc,hsc,reward
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, const NetworkConfig& cfg,
                           const PipelineState& state, const Action& action,
                           const Realization& real, const RewardBreakdown& reward);

// Convenience wrapper owning a state and an uncertainty stream.
class Environment {
  public:
    Environment(const NetworkConfig& cfg, std::uint64_t seed)
        : cfg_(&cfg), rng_(derive_seed(seed, 0x9e11)), state_(reset(cfg, seed)) {}

    const NetworkConfig& config() const { return *cfg_; }
    const PipelineState& state() const { return state_; }

    // Fulfils the requested action proportionally, then steps.
    // Returns the reward breakdown; `fulfilled` receives the shipped action
    // and `realized` the sampled uncertainty.
    RewardBreakdown step_fulfilled(const Action& requested, Action* fulfilled = nullptr,
                                   Realization* realized = nullptr);

  private:
    const NetworkConfig* cfg_;
    Rng rng_;
    PipelineState state_;
};

}  // namespace parl
