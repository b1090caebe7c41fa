#include "parl/milp_build.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parl {

EncodedNet encode_network(MilpModel& model, const ReluNet& net, const LayerBounds& bounds,
                          const std::vector<int>& input_vars, const std::string& suffix) {
    if (static_cast<int>(input_vars.size()) != net.input_size())
        throw std::invalid_argument("encode_network: input variable count mismatch");
    for (int v : input_vars)
        if (!std::isfinite(model.vars[v].lower) || !std::isfinite(model.vars[v].upper))
            throw std::invalid_argument("encode_network: unbounded input variable " +
                                        model.vars[v].name);

    EncodedNet enc;
    std::vector<int> prev_vars = input_vars;
    for (size_t k = 0; k < net.weights.size(); ++k) {
        const auto& w = net.weights[k];
        const auto& lo = bounds.lower[k];
        const auto& hi = bounds.upper[k];
        std::vector<int> layer_vars;
        for (int q = 0; q < w.rows(); ++q) {
            Eigen::VectorXd row = w.row(q).transpose();
            // Layer 1 consumes raw state variables: fold the input scale in.
            if (k == 0 && net.input_scale.size() > 0)
                row = row.cwiseQuotient(net.input_scale);
            auto [mp, mm] = neuron_big_m(row, net.biases[k](q),
                                         k == 0 && net.input_scale.size() > 0
                                             ? (lo.cwiseProduct(net.input_scale)).eval()
                                             : lo,
                                         k == 0 && net.input_scale.size() > 0
                                             ? (hi.cwiseProduct(net.input_scale)).eval()
                                             : hi);
            std::string zname = "z" + std::to_string(k + 1) + "_" + std::to_string(q) + suffix;
            std::vector<std::pair<int, double>> affine;
            for (int j = 0; j < row.size(); ++j)
                if (row(j) != 0.0) affine.push_back({prev_vars[j], row(j)});

            if (mp <= 0.0) {
                // Dead neuron: z = 0.
                int z = model.add_var(zname, VarKind::Continuous, 0.0, 0.0);
                model.add_constraint("dead_" + zname, {{z, 1.0}}, Sense::Equal, 0.0);
                layer_vars.push_back(z);
                ++enc.fixed_neurons;
                continue;
            }
            if (mm >= 0.0) {
                // Always-active neuron: z = w.x + b.
                int z = model.add_var(zname, VarKind::Continuous, mm, mp);
                auto terms = affine;
                terms.push_back({z, -1.0});
                model.add_constraint("act_" + zname, std::move(terms), Sense::Equal,
                                     -net.biases[k](q));
                layer_vars.push_back(z);
                ++enc.fixed_neurons;
                continue;
            }
            int z = model.add_var(zname, VarKind::Continuous, 0.0, std::max(0.0, mp));
            int y = model.add_var("y" + std::to_string(k + 1) + "_" + std::to_string(q) + suffix,
                                  VarKind::Binary, 0.0, 1.0);
            ++enc.binaries;
            {  // z >= w.x + b
                auto terms = affine;
                terms.push_back({z, -1.0});
                model.add_constraint("relu1_" + zname, std::move(terms), Sense::LessEqual,
                                     -net.biases[k](q));
            }
            // z >= 0 (also implied by the bound; kept as an explicit row)
            model.add_constraint("relu2_" + zname, {{z, 1.0}}, Sense::GreaterEqual, 0.0);
            {  // z <= w.x + b - M-(1-y)
                auto terms = affine;
                for (auto& t : terms) t.second = -t.second;
                terms.push_back({z, 1.0});
                terms.push_back({y, mm});
                model.add_constraint("relu3_" + zname, std::move(terms), Sense::LessEqual,
                                     net.biases[k](q) - mm);
            }
            // z <= M+ y
            model.add_constraint("relu4_" + zname, {{z, 1.0}, {y, -mp}}, Sense::LessEqual, 0.0);
            layer_vars.push_back(z);
        }
        prev_vars = std::move(layer_vars);
    }
    enc.output_vars = std::move(prev_vars);
    return enc;
}

void state_box(const NetworkConfig& cfg, std::vector<double>* lo, std::vector<double>* hi) {
    lo->clear();
    hi->clear();
    for (const auto& d : cfg.state_dims) {
        lo->push_back(d.lower);
        hi->push_back(d.upper);
    }
}

std::vector<double> critic_input_scale(const NetworkConfig& cfg) {
    std::vector<double> scale;
    for (const auto& d : cfg.state_dims) scale.push_back(std::max(1.0, d.upper));
    return scale;
}

Action StepProblem::extract_action(const std::vector<double>& point) const {
    Action a = Action::zeros(x_vars.size());
    for (size_t e = 0; e < x_vars.size(); ++e)
        a.qty[e] = static_cast<int>(std::llround(point[x_vars[e]]));
    return a;
}

StepProblem build_step_problem(const NetworkConfig& cfg, const PipelineState& state,
                               const std::vector<Realization>& samples,
                               const std::vector<double>& weights, const ReluNet* net,
                               const LayerBounds* bounds, double gamma,
                               const StepProblemOptions& opt) {
    if (samples.empty()) throw std::invalid_argument("build_step_problem: no samples");
    if (samples.size() != weights.size())
        throw std::invalid_argument("build_step_problem: sample/weight count mismatch");
    {
        double total = 0.0;
        for (double w : weights) {
            if (w <= 0) throw std::invalid_argument("build_step_problem: weights must be > 0");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("build_step_problem: weights must sum to 1");
    }
    if (net && net->input_size() != cfg.state_size())
        throw std::invalid_argument("build_step_problem: network input dimension mismatch");
    if (net && !bounds)
        throw std::invalid_argument("build_step_problem: propagated bounds required with a net");

    StepProblem sp;
    sp.gamma = gamma;
    MilpModel& m = sp.model;
    const size_t eta = samples.size();

    // Shared shipment and order-indicator variables.
    for (size_t e = 0; e < cfg.links.size(); ++e) {
        const auto& l = cfg.links[e];
        sp.x_vars.push_back(m.add_var("x_" + l.from + "_" + l.to,
                                      opt.relax_integrality ? VarKind::Continuous
                                                            : VarKind::Integer,
                                      l.min_order, l.max_order, -l.variable_cost));
        sp.g_vars.push_back(
            m.add_var("g_" + l.from + "_" + l.to, VarKind::Binary, 0.0, 1.0, -l.fixed_cost));
    }
    for (size_t e = 0; e < cfg.links.size(); ++e) {
        const auto& l = cfg.links[e];
        m.add_constraint("ind1_" + l.from + "_" + l.to,
                         {{sp.g_vars[e], 1.0}, {sp.x_vars[e], -1.0}}, Sense::LessEqual, 0.0);
        m.add_constraint("ind2_" + l.from + "_" + l.to,
                         {{sp.x_vars[e], 1.0}, {sp.g_vars[e], -static_cast<double>(l.max_order)}},
                         Sense::LessEqual, 0.0);
    }
    // Supply feasibility: a node cannot ship more than its on-hand stock.
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        if (cfg.outgoing[n].empty() || cfg.nodes[n].infinite_supply) continue;
        std::vector<std::pair<int, double>> terms;
        for (int e : cfg.outgoing[n]) terms.push_back({sp.x_vars[e], 1.0});
        m.add_constraint("supply_" + cfg.nodes[n].id, std::move(terms), Sense::LessEqual,
                         state.on_hand(static_cast<int>(n)));
    }

    std::vector<double> box_lo, box_hi;
    state_box(cfg, &box_lo, &box_hi);

    for (size_t i = 0; i < eta; ++i) {
        const std::string sfx = "_s" + std::to_string(i);
        const double wi = weights[i];
        const Realization& real = samples[i];
        std::vector<int> next_vars(cfg.state_dims.size(), -1);

        for (size_t n = 0; n < cfg.nodes.size(); ++n) {
            if (!cfg.tracked(static_cast<int>(n))) continue;
            const auto& node = cfg.nodes[n];
            const auto& pipe = state.pipe[n];
            const std::string& id = node.id;

            double inflow_const = pipe[0] + (pipe.size() > 1 ? pipe[1] : 0.0) +
                                  static_cast<double>(real.production[n]);
            double ih_ub = inflow_const;
            for (int e : cfg.incoming[n])
                if (cfg.links[e].lead_time == 0) ih_ub += cfg.links[e].max_order;

            int ih = m.add_var("ih_" + id + sfx, VarKind::Continuous, 0.0, ih_ub);
            {
                std::vector<std::pair<int, double>> terms{{ih, 1.0}};
                for (int e : cfg.incoming[n])
                    if (cfg.links[e].lead_time == 0) terms.push_back({sp.x_vars[e], -1.0});
                for (int e : cfg.outgoing[n]) terms.push_back({sp.x_vars[e], 1.0});
                m.add_constraint("ihdef_" + id + sfx, std::move(terms), Sense::Equal,
                                 inflow_const);
            }

            int sa = -1;
            double owed = 0.0;
            if (node.has_demand) {
                owed = static_cast<double>(real.demand[n]) +
                       (node.demand_type == DemandType::Backorder ? state.backlog[n] : 0.0);
                sa = m.add_var("sa_" + id + sfx, VarKind::Continuous, 0.0, owed,
                               wi * node.price);
                m.add_constraint("saledem_" + id + sfx, {{sa, 1.0}}, Sense::LessEqual, owed);
                m.add_constraint("saleinv_" + id + sfx, {{sa, 1.0}, {ih, -1.0}},
                                 Sense::LessEqual, 0.0);
            }

            int sv = m.add_var("sv_" + id + sfx, VarKind::Continuous, 0.0, ih_ub,
                               -wi * node.spillage_cost);

            // Pipeline of the next state.
            for (int j = 0; j <= cfg.max_lead[n]; ++j) {
                int dim = -1;
                for (size_t d = 0; d < cfg.state_dims.size(); ++d)
                    if (cfg.state_dims[d].node == static_cast<int>(n) &&
                        cfg.state_dims[d].slot == j && !cfg.state_dims[d].is_backlog)
                        dim = static_cast<int>(d);
                double slot_ub = cfg.state_dims[dim].upper;
                if (j == 0) {
                    int np = m.add_var("np_" + id + "_0" + sfx, VarKind::Continuous, 0.0,
                                       std::min(node.capacity, slot_ub),
                                       -wi * node.holding_cost);
                    std::vector<std::pair<int, double>> terms{{np, 1.0}, {ih, -1.0}, {sv, 1.0}};
                    if (sa >= 0) terms.push_back({sa, 1.0});
                    m.add_constraint("npdef_" + id + "_0" + sfx, std::move(terms), Sense::Equal,
                                     0.0);
                    next_vars[dim] = np;
                } else {
                    int np = m.add_var("np_" + id + "_" + std::to_string(j) + sfx,
                                       VarKind::Continuous, 0.0, slot_ub);
                    std::vector<std::pair<int, double>> terms{{np, 1.0}};
                    for (int e : cfg.incoming[n])
                        if (cfg.links[e].lead_time == j) terms.push_back({sp.x_vars[e], -1.0});
                    if (opt.salvage_all_slots) {
                        int svj = m.add_var("sv_" + id + "_" + std::to_string(j) + sfx,
                                            VarKind::Continuous, 0.0, slot_ub,
                                            -wi * node.spillage_cost);
                        terms.push_back({svj, 1.0});
                    }
                    double carried =
                        (j + 1 < static_cast<int>(pipe.size())) ? pipe[j + 1] : 0.0;
                    m.add_constraint("npdef_" + id + "_" + std::to_string(j) + sfx,
                                     std::move(terms), Sense::Equal, carried);
                    next_vars[dim] = np;
                }
            }

            if (node.has_demand && node.demand_type == DemandType::Backorder) {
                int dim = -1;
                for (size_t d = 0; d < cfg.state_dims.size(); ++d)
                    if (cfg.state_dims[d].node == static_cast<int>(n) &&
                        cfg.state_dims[d].is_backlog)
                        dim = static_cast<int>(d);
                int nb = m.add_var("nb_" + id + sfx, VarKind::Continuous, 0.0,
                                   cfg.state_dims[dim].upper, -wi * node.backorder_penalty);
                m.add_constraint("nbdef_" + id + sfx, {{nb, 1.0}, {sa, 1.0}}, Sense::Equal,
                                 owed);
                next_vars[dim] = nb;
            }
        }

        sp.next_state_vars.push_back(next_vars);
        if (net) {
            EncodedNet enc = encode_network(m, *net, *bounds, next_vars, sfx);
            for (size_t q = 0; q < enc.output_vars.size(); ++q)
                m.objective[enc.output_vars[q]] += wi * gamma * net->output(q);
            sp.nets.push_back(std::move(enc));
        }
    }
    return sp;
}

}  // namespace parl
