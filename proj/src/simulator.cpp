#include "parl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace parl {

PipelineState reset(const NetworkConfig& cfg, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x5e7));
    PipelineState s;
    s.pipe.resize(cfg.nodes.size());
    s.backlog.assign(cfg.nodes.size(), 0.0);
    s.period = 0;
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        if (!cfg.tracked(static_cast<int>(n))) continue;
        s.pipe[n].resize(cfg.max_lead[n] + 1);
        for (auto& slot : s.pipe[n])
            slot = static_cast<double>(discretize(cfg.initial_inventory.sample(rng)));
    }
    return s;
}

Realization sample_uncertainty(const NetworkConfig& cfg, Rng& rng) {
    Realization r;
    r.demand.assign(cfg.nodes.size(), 0);
    r.production.assign(cfg.nodes.size(), 0);
    // One draw per stochastic quantity in node order, so the realization
    // stream depends only on the rng state, never on the policy.
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        const auto& node = cfg.nodes[n];
        if (node.has_demand) r.demand[n] = discretize(node.demand.sample(rng));
        if (node.has_production && !node.infinite_supply)
            r.production[n] = discretize(node.production.sample(rng));
    }
    return r;
}

Action apply_proportional_fulfillment(const NetworkConfig& cfg, const PipelineState& state,
                                      const Action& requested) {
    Action shipped = requested;
    for (auto& q : shipped.qty) q = std::max(q, 0);

    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        const auto& out = cfg.outgoing[n];
        if (out.empty() || cfg.nodes[n].infinite_supply) continue;
        long long total = 0;
        for (int e : out) total += shipped.qty[e];
        const long long avail = static_cast<long long>(state.on_hand(static_cast<int>(n)));
        if (total <= avail) continue;
        if (avail <= 0) {
            for (int e : out) shipped.qty[e] = 0;
            continue;
        }
        // Largest-remainder apportionment of `avail` over the requests.
        double scale = static_cast<double>(avail) / static_cast<double>(total);
        std::vector<double> quota(out.size());
        std::vector<int> floors(out.size());
        long long assigned = 0;
        for (size_t k = 0; k < out.size(); ++k) {
            quota[k] = shipped.qty[out[k]] * scale;
            floors[k] = static_cast<int>(std::floor(quota[k] + 1e-9));
            assigned += floors[k];
        }
        std::vector<size_t> order(out.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            double ra = quota[a] - floors[a], rb = quota[b] - floors[b];
            if (std::abs(ra - rb) > 1e-9) return ra > rb;
            if (floors[a] != floors[b]) return floors[a] < floors[b];
            return a < b;
        });
        long long remaining = avail - assigned;
        for (size_t k = 0; k < out.size() && remaining > 0; ++k, --remaining)
            ++floors[order[k]];
        for (size_t k = 0; k < out.size(); ++k) shipped.qty[out[k]] = floors[k];
    }
    return shipped;
}

bool action_supply_feasible(const NetworkConfig& cfg, const PipelineState& state,
                            const Action& action) {
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        if (cfg.nodes[n].infinite_supply) continue;
        long long total = 0;
        for (int e : cfg.outgoing[n]) total += action.qty[e];
        if (total > static_cast<long long>(state.on_hand(static_cast<int>(n)) + 1e-9))
            return false;
    }
    for (size_t e = 0; e < cfg.links.size(); ++e)
        if (action.qty[e] < 0 || action.qty[e] > cfg.links[e].max_order) return false;
    return true;
}

StepResult step(const NetworkConfig& cfg, const PipelineState& state, const Action& action,
                const Realization& real) {
    if (action.qty.size() != cfg.links.size())
        throw std::invalid_argument("step: action size does not match link count");
    if (!action_supply_feasible(cfg, state, action))
        throw std::invalid_argument("step: action exceeds on-hand supply or link bounds");

    const size_t N = cfg.nodes.size();
    StepResult out;
    out.reward.per_node.resize(N);
    out.state.pipe.resize(N);
    out.state.backlog.assign(N, 0.0);
    out.state.period = state.period + 1;

    for (size_t n = 0; n < N; ++n) {
        const auto& node = cfg.nodes[n];
        auto& rw = out.reward.per_node[n];

        // 2. Trans-shipment costs on incoming orders.
        for (int e : cfg.incoming[n]) {
            if (action.qty[e] > 0)
                rw.transship_cost += cfg.links[e].fixed_cost +
                                     cfg.links[e].variable_cost * action.qty[e];
        }
        if (!cfg.tracked(static_cast<int>(n))) continue;

        // 3. Intermediate on-hand inventory.
        const auto& pipe = state.pipe[n];
        double inter = pipe[0] + (pipe.size() > 1 ? pipe[1] : 0.0) +
                       static_cast<double>(real.production[n]);
        for (int e : cfg.incoming[n])
            if (cfg.links[e].lead_time == 0) inter += action.qty[e];
        for (int e : cfg.outgoing[n]) inter -= action.qty[e];

        // 4. Demand fulfilment.
        double sales = 0.0;
        double new_backlog = 0.0;
        if (node.has_demand) {
            double dem = static_cast<double>(real.demand[n]);
            if (node.demand_type == DemandType::Backorder) {
                double owed = dem + state.backlog[n];
                sales = std::min(owed, inter);
                new_backlog = owed - sales;
            } else {
                sales = std::min(dem, inter);
            }
            rw.revenue = node.price * sales;
        }

        // 5. Holding and spillage on the left-over inventory.
        double leftover = inter - sales;
        double kept = std::min(node.capacity, leftover);
        double spilled = leftover - kept;
        rw.holding_cost = node.holding_cost * kept + node.spillage_cost * spilled +
                          node.backorder_penalty * new_backlog;

        // 6. Pipeline rotation.
        auto& next = out.state.pipe[n];
        next.assign(cfg.max_lead[n] + 1, 0.0);
        next[0] = kept;
        for (int j = 1; j <= cfg.max_lead[n]; ++j)
            next[j] = (j + 1 < static_cast<int>(pipe.size())) ? pipe[j + 1] : 0.0;
        for (int e : cfg.incoming[n]) {
            int lead = cfg.links[e].lead_time;
            if (lead >= 1) next[lead] += action.qty[e];
        }
        out.state.backlog[n] = new_backlog;
    }

    for (const auto& rw : out.reward.per_node)
        out.reward.total += rw.revenue - rw.transship_cost - rw.holding_cost;
    return out;
}

double inventory_position(const NetworkConfig& cfg, const PipelineState& state, int node,
                          int horizon) {
    if (node < 0 || node >= static_cast<int>(cfg.nodes.size()))
        throw std::invalid_argument("inventory_position: unknown node");
    const auto& pipe = state.pipe[node];
    if (horizon >= static_cast<int>(pipe.size()))
        throw std::invalid_argument("inventory_position: horizon exceeds pipeline length");
    double ip = 0.0;
    for (int j = 0; j <= horizon; ++j) ip += pipe[j];
    return ip - state.backlog[node];
}

std::vector<double> state_to_vector(const NetworkConfig& cfg, const PipelineState& state) {
    std::vector<double> v;
    v.reserve(cfg.state_dims.size());
    for (const auto& d : cfg.state_dims)
        v.push_back(d.is_backlog ? state.backlog[d.node] : state.pipe[d.node][d.slot]);
    return v;
}

PipelineState state_from_vector(const NetworkConfig& cfg, const std::vector<double>& v,
                                int period) {
    if (v.size() != cfg.state_dims.size())
        throw std::invalid_argument("state_from_vector: dimension mismatch");
    PipelineState s;
    s.pipe.resize(cfg.nodes.size());
    s.backlog.assign(cfg.nodes.size(), 0.0);
    s.period = period;
    for (size_t n = 0; n < cfg.nodes.size(); ++n)
        if (cfg.tracked(static_cast<int>(n))) s.pipe[n].assign(cfg.max_lead[n] + 1, 0.0);
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& d = cfg.state_dims[i];
        if (d.is_backlog) s.backlog[d.node] = v[i];
        else s.pipe[d.node][d.slot] = v[i];
    }
    return s;
}

void write_trajectory_header(std::ostream& out) {
    out << "period,node,on_hand,pipeline,backlog,orders,demand,rs,tsc,hsc,reward\n";
}

void write_trajectory_rows(std::ostream& out, const NetworkConfig& cfg,
                           const PipelineState& state, const Action& action,
                           const Realization& real, const RewardBreakdown& reward) {
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        const auto& rw = reward.per_node[n];
        out << state.period << ',' << cfg.nodes[n].id << ',';
        if (cfg.tracked(static_cast<int>(n))) {
            out << state.pipe[n][0] << ',';
            for (size_t j = 0; j < state.pipe[n].size(); ++j)
                out << (j ? "|" : "") << state.pipe[n][j];
        } else {
            out << "inf,";
        }
        out << ',' << state.backlog[n] << ',';
        bool first = true;
        for (int e : cfg.incoming[n]) {
            out << (first ? "" : "|") << cfg.links[e].from << ':' << action.qty[e];
            first = false;
        }
        out << ',' << real.demand[n] << ',' << rw.revenue << ',' << rw.transship_cost << ','
            << rw.holding_cost << ',' << (rw.revenue - rw.transship_cost - rw.holding_cost)
            << '\n';
    }
}

RewardBreakdown Environment::step_fulfilled(const Action& requested, Action* fulfilled,
                                            Realization* realized) {
    Action act = apply_proportional_fulfillment(*cfg_, state_, requested);
    for (size_t e = 0; e < act.qty.size(); ++e)
        act.qty[e] = std::min(act.qty[e], cfg_->links[e].max_order);
    Realization real = sample_uncertainty(*cfg_, rng_);
    auto res = step(*cfg_, state_, act, real);
    state_ = std::move(res.state);
    if (fulfilled) *fulfilled = act;
    if (realized) *realized = std::move(real);
    return res.reward;
}

}  // namespace parl
