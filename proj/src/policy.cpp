#include "parl/policy.hpp"

#include <cmath>

namespace parl {

Action uniform_random_action(const NetworkConfig& cfg, Rng& rng) {
    Action a = Action::zeros(cfg.links.size());
    for (size_t e = 0; e < cfg.links.size(); ++e)
        a.qty[e] = static_cast<int>(
            uniform_int(rng, cfg.links[e].min_order, cfg.links[e].max_order));
    return a;
}

Action RandomPolicy::act(const PipelineState&) { return uniform_random_action(*cfg_, rng_); }

Action greedy_action(const NetworkConfig& cfg, const PipelineState& state,
                     const SampleSet& samples, const ReluNet* net, const LayerBounds* bounds,
                     const GreedyOptions& opt, GreedyInfo* info) {
    GreedyInfo local;
    GreedyInfo& out = info ? *info : local;

    bool enumerate = opt.solver == SolverChoice::Enumeration ||
                     (opt.solver == SolverChoice::Auto &&
                      action_box_size(cfg) <= opt.enumeration_cap);
    if (enumerate) {
        EnumerationResult res =
            solve_enumeration(cfg, state, samples, net, opt.gamma, opt.enumeration_cap);
        out.used_enumeration = true;
        out.objective = res.objective;
        return res.action;
    }

    StepProblemOptions spo;
    spo.relax_integrality = opt.relax_integrality;
    StepProblem sp = build_step_problem(cfg, state, samples.samples, samples.weights, net,
                                        bounds, opt.gamma, spo);
    BnbOptions bo;
    bo.time_limit_seconds = opt.time_limit_seconds;
    MipResult res = solve_branch_and_bound(sp.model, bo);
    out.nodes = res.nodes;
    out.lp_solves = res.lp_solves;
    if (res.x.empty()) {
        // No incumbent within the budget: fall back to ordering nothing.
        out.fallback_zero = true;
        out.objective = 0.0;
        return Action::zeros(cfg.links.size());
    }
    out.objective = res.objective;
    return sp.extract_action(res.x);
}

GreedyMipPolicy::GreedyMipPolicy(const NetworkConfig& cfg, std::shared_ptr<const ReluNet> net,
                                 const GreedyPolicyConfig& pc, std::uint64_t seed)
    : cfg_(&cfg), net_(std::move(net)), pc_(pc), rng_(derive_seed(seed, 0x6d1)) {
    if (pc_.scheme == SamplingScheme::Quantile)
        quantile_set_ = quantile_samples(cfg, pc_.eta, pc_.quantile_weights);
    if (net_) {
        std::vector<double> lo, hi;
        state_box(cfg, &lo, &hi);
        bounds_ = propagate_bounds(*net_, lo, hi);
    }
}

Action GreedyMipPolicy::act(const PipelineState& state) {
    SampleSet samples = pc_.scheme == SamplingScheme::Quantile
                            ? *quantile_set_
                            : random_samples(*cfg_, pc_.eta, rng_);
    GreedyOptions opt;
    opt.gamma = pc_.gamma;
    opt.solver = pc_.solver;
    opt.enumeration_cap = pc_.enumeration_cap;
    opt.time_limit_seconds = pc_.time_limit_seconds;
    GreedyInfo info;
    Action a = greedy_action(*cfg_, state, samples, net_.get(),
                             bounds_ ? &*bounds_ : nullptr, opt, &info);
    if (info.fallback_zero) ++fallback_count;
    return a;
}

}  // namespace parl
