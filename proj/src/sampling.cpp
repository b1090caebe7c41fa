#include "parl/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace parl {

void SampleSet::normalize() {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0.0) throw std::invalid_argument("SampleSet: nonpositive total weight");
    for (double& w : weights) w /= total;
}

SampleSet random_samples(const NetworkConfig& cfg, int count, Rng& rng) {
    if (count < 1) throw std::invalid_argument("random_samples: count must be >= 1");
    SampleSet set;
    set.scheme = SamplingScheme::Random;
    for (int i = 0; i < count; ++i) {
        set.samples.push_back(sample_uncertainty(cfg, rng));
        set.weights.push_back(1.0 / count);
    }
    return set;
}

namespace {

struct QuantileDim {
    int node = -1;
    bool is_demand = true;
    std::vector<long long> values;   // clamp-rounded F^-1(q_i), sorted by weight desc
    std::vector<double> weights;
};

}  // namespace

SampleSet quantile_samples(const NetworkConfig& cfg, int count, QuantileWeights mode) {
    if (count < 1) throw std::invalid_argument("quantile_samples: count must be >= 1");

    std::vector<QuantileDim> dims;
    Realization base;
    base.demand.assign(cfg.nodes.size(), 0);
    base.production.assign(cfg.nodes.size(), 0);

    auto add_dim = [&](int node, bool is_demand, const Distribution& dist) {
        if (dist.is_constant()) {
            (is_demand ? base.demand[node] : base.production[node]) = discretize(dist.a);
            return;
        }
        QuantileDim d;
        d.node = node;
        d.is_demand = is_demand;
        std::vector<std::pair<double, long long>> entries;  // (weight, value)
        for (int i = 1; i <= count; ++i) {
            double q = (i - 0.5) / count;
            long long value = discretize(dist.inv_cdf(q));
            double w = 1.0;
            if (mode == QuantileWeights::DensityAtLevel) {
                // As printed: the density is evaluated at the level itself,
                // except for discrete distributions where the pmf at the
                // sampled point is the only meaningful reading.
                w = dist.kind == Distribution::Kind::Uniform
                        ? dist.density(static_cast<double>(value))
                        : dist.density(q);
                if (!(w > 0.0)) w = 1e-300;
            }
            entries.push_back({w, value});
        }
        std::vector<size_t> order(entries.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return entries[a].first > entries[b].first; });
        for (size_t k : order) {
            d.weights.push_back(entries[k].first);
            d.values.push_back(entries[k].second);
        }
        dims.push_back(std::move(d));
    };

    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        const auto& node = cfg.nodes[n];
        if (node.has_demand) add_dim(static_cast<int>(n), true, node.demand);
        if (node.has_production && !node.infinite_supply)
            add_dim(static_cast<int>(n), false, node.production);
    }

    SampleSet set;
    set.scheme = SamplingScheme::Quantile;
    if (dims.empty()) {
        set.samples.push_back(base);
        set.weights.push_back(1.0);
        return set;
    }

    // Top-`count` product weights over the rank lattice: each combo picks a
    // per-dimension rank; incrementing any rank can only lower the product,
    // so a best-first frontier search enumerates combos in weight order.
    struct Combo {
        double weight;
        std::vector<int> ranks;
        bool operator<(const Combo& other) const {
            if (weight != other.weight) return weight < other.weight;
            return ranks > other.ranks;  // deterministic tie order
        }
    };
    std::priority_queue<Combo> frontier;
    std::set<std::vector<int>> seen;
    {
        Combo first{1.0, std::vector<int>(dims.size(), 0)};
        for (const auto& d : dims) first.weight *= d.weights[0];
        frontier.push(first);
        seen.insert(first.ranks);
    }
    while (!frontier.empty() && static_cast<int>(set.samples.size()) < count) {
        Combo top = frontier.top();
        frontier.pop();
        Realization real = base;
        for (size_t d = 0; d < dims.size(); ++d) {
            long long v = dims[d].values[top.ranks[d]];
            (dims[d].is_demand ? real.demand[dims[d].node]
                               : real.production[dims[d].node]) = v;
        }
        set.samples.push_back(std::move(real));
        set.weights.push_back(top.weight);
        for (size_t d = 0; d < dims.size(); ++d) {
            if (top.ranks[d] + 1 >= count) continue;
            Combo next = top;
            ++next.ranks[d];
            if (!seen.insert(next.ranks).second) continue;
            next.weight = top.weight / dims[d].weights[top.ranks[d]] *
                          dims[d].weights[next.ranks[d]];
            frontier.push(next);
        }
    }
    set.normalize();
    return set;
}

}  // namespace parl
