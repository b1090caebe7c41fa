#include "parl/enumeration.hpp"

#include <algorithm>
#include <limits>

namespace parl {

double saa_objective(const NetworkConfig& cfg, const PipelineState& state, const Action& action,
                     const SampleSet& samples, const ReluNet* net, double gamma) {
    double total = 0.0;
    for (size_t i = 0; i < samples.samples.size(); ++i) {
        StepResult res = step(cfg, state, action, samples.samples[i]);
        double value = res.reward.total;
        if (net) value += gamma * net->forward(state_to_vector(cfg, res.state));
        total += samples.weights[i] * value;
    }
    return total;
}

long long action_box_size(const NetworkConfig& cfg) {
    long long size = 1;
    for (const auto& l : cfg.links) {
        long long span = static_cast<long long>(l.max_order) - l.min_order + 1;
        if (size > std::numeric_limits<long long>::max() / span)
            return std::numeric_limits<long long>::max();
        size *= span;
    }
    return size;
}

EnumerationResult solve_enumeration(const NetworkConfig& cfg, const PipelineState& state,
                                    const SampleSet& samples, const ReluNet* net, double gamma,
                                    long long cap) {
    if (action_box_size(cfg) > cap)
        throw EnumerationCapExceeded(
            "solve_enumeration: action box exceeds the enumeration cap; "
            "use branch and bound");

    // Remaining on-hand per node as the DFS assigns links in index order.
    std::vector<double> remaining(cfg.nodes.size());
    for (size_t n = 0; n < cfg.nodes.size(); ++n)
        remaining[n] = cfg.nodes[n].infinite_supply
                           ? std::numeric_limits<double>::infinity()
                           : state.on_hand(static_cast<int>(n));

    EnumerationResult best;
    best.objective = -std::numeric_limits<double>::infinity();
    Action current = Action::zeros(cfg.links.size());

    // Lexicographic DFS; the first optimum found is the smallest tie.
    auto recurse = [&](auto&& self, size_t e) -> void {
        if (e == cfg.links.size()) {
            ++best.evaluated;
            double obj = saa_objective(cfg, state, current, samples, net, gamma);
            if (obj > best.objective + 1e-12) {
                best.objective = obj;
                best.action = current;
            }
            return;
        }
        const auto& l = cfg.links[e];
        const int from = l.from_node;
        int hi = l.max_order;
        if (std::isfinite(remaining[from]))
            hi = std::min(hi, static_cast<int>(remaining[from]));
        for (int q = l.min_order; q <= hi; ++q) {
            current.qty[e] = q;
            remaining[from] -= q;
            self(self, e + 1);
            remaining[from] += q;
        }
        current.qty[e] = 0;
    };
    recurse(recurse, 0);

    if (best.evaluated == 0)
        throw std::runtime_error("solve_enumeration: no supply-feasible action exists");
    return best;
}

}  // namespace parl
