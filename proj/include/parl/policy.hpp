#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "parl/bnb.hpp"
#include "parl/enumeration.hpp"
#include "parl/milp_build.hpp"
#include "parl/relu_net.hpp"
#include "parl/sampling.hpp"
#include "parl/simulator.hpp"

namespace parl {

enum class SolverChoice { Auto, Enumeration, BranchAndBound };

struct GreedyOptions {
    double gamma = 0.75;
    SolverChoice solver = SolverChoice::Auto;
    long long enumeration_cap = 1000000;
    double time_limit_seconds = 60.0;
    bool relax_integrality = false;
};

struct GreedyInfo {
    double objective = 0.0;
    bool used_enumeration = false;
    bool fallback_zero = false;  // solver yielded no incumbent in time
    long nodes = 0;
    long lp_solves = 0;
};

// The MIP/enumeration argmax of the SAA objective for one state.
// `bounds` must be propagate_bounds(net, state box) when a net is given
// and the branch-and-bound path may run.
Action greedy_action(const NetworkConfig& cfg, const PipelineState& state,
                     const SampleSet& samples, const ReluNet* net, const LayerBounds* bounds,
                     const GreedyOptions& opt, GreedyInfo* info = nullptr);

class Policy {
  public:
    virtual ~Policy() = default;
    virtual Action act(const PipelineState& state) = 0;
    virtual std::string name() const = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>(std::uint64_t seed)>;

class ZeroPolicy : public Policy {
  public:
    explicit ZeroPolicy(const NetworkConfig& cfg) : links_(cfg.links.size()) {}
    Action act(const PipelineState&) override { return Action::zeros(links_); }
    std::string name() const override { return "zero"; }

  private:
    size_t links_;
};

// Uniform order on every link; the environment's proportional
// fulfilment makes it supply-feasible.
class RandomPolicy : public Policy {
  public:
    RandomPolicy(const NetworkConfig& cfg, std::uint64_t seed)
        : cfg_(&cfg), rng_(derive_seed(seed, 0xac7)) {}
    Action act(const PipelineState&) override;
    std::string name() const override { return "random"; }

  private:
    const NetworkConfig* cfg_;
    Rng rng_;
};

struct GreedyPolicyConfig {
    double gamma = 0.75;
    int eta = 3;
    SamplingScheme scheme = SamplingScheme::Quantile;
    QuantileWeights quantile_weights = QuantileWeights::DensityAtLevel;
    SolverChoice solver = SolverChoice::Auto;
    long long enumeration_cap = 1000000;
    double time_limit_seconds = 60.0;
};

// Per-step MIP greedy policy over a fixed critic snapshot. Quantile
// sample sets are state-independent and computed once; random sampling
// redraws from the policy's own stream each step.
class GreedyMipPolicy : public Policy {
  public:
    GreedyMipPolicy(const NetworkConfig& cfg, std::shared_ptr<const ReluNet> net,
                    const GreedyPolicyConfig& pc, std::uint64_t seed);
    Action act(const PipelineState& state) override;
    std::string name() const override { return "parl-greedy"; }

    long fallback_count = 0;

  private:
    const NetworkConfig* cfg_;
    std::shared_ptr<const ReluNet> net_;
    GreedyPolicyConfig pc_;
    Rng rng_;
    std::optional<SampleSet> quantile_set_;
    std::optional<LayerBounds> bounds_;
};

Action uniform_random_action(const NetworkConfig& cfg, Rng& rng);

}  // namespace parl
