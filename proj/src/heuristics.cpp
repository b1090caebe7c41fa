#include "parl/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "parl/training.hpp"

#include <nlohmann/json.hpp>

namespace parl {

Action base_stock_action(const NetworkConfig& cfg, const BaseStockParams& params,
                         const PipelineState& state) {
    if (params.reorder_point.size() != cfg.links.size() ||
        params.order_up_to.size() != cfg.links.size())
        throw std::invalid_argument("base_stock_action: parameters must cover all links");
    Action a = Action::zeros(cfg.links.size());
    for (size_t e = 0; e < cfg.links.size(); ++e) {
        const auto& l = cfg.links[e];
        double ip = inventory_position(cfg, state, l.to_node, l.lead_time);
        if (ip <= params.reorder_point[e]) {
            double order = std::max(0.0, params.order_up_to[e] - ip);
            a.qty[e] = static_cast<int>(std::min<double>(l.max_order, order));
        }
    }
    return a;
}

namespace {

// Retailers downstream of `node` (node itself if it is a retailer).
std::vector<int> downstream_retailers(const NetworkConfig& cfg, int node) {
    std::vector<int> found;
    std::deque<int> queue{node};
    std::vector<char> seen(cfg.nodes.size(), 0);
    seen[node] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (cfg.nodes[v].kind == NodeKind::Retailer) found.push_back(v);
        for (int e : cfg.outgoing[v])
            if (!seen[cfg.links[e].to_node]) {
                seen[cfg.links[e].to_node] = 1;
                queue.push_back(cfg.links[e].to_node);
            }
    }
    return found;
}

}  // namespace

NetworkConfig base_stock_surrogate(const NetworkConfig& cfg, int link) {
    const auto& l = cfg.links[link];
    const auto& target = cfg.nodes[l.to_node];

    NetworkConfig sur;
    sur.name = cfg.name + ":surrogate:" + l.from + "->" + l.to;
    sur.initial_inventory = cfg.initial_inventory;
    sur.backlog_cap = cfg.backlog_cap;

    NodeSpec src;
    src.id = "SRC";
    src.kind = NodeKind::Supplier;
    src.infinite_supply = true;
    sur.nodes.push_back(src);

    NodeSpec ret = target;
    ret.kind = NodeKind::Retailer;
    if (!target.has_demand) {
        // Warehouse treated as a retailer facing the summed downstream demand.
        auto retailers = downstream_retailers(cfg, l.to_node);
        if (retailers.empty())
            throw std::invalid_argument("base_stock_surrogate: link serves no retailer");
        double mu = 0.0, var = 0.0, price = 0.0, mu_total = 0.0;
        for (int r : retailers) {
            const auto& d = cfg.nodes[r].demand;
            mu += d.mean();
            var += d.stddev() * d.stddev();
            price += cfg.nodes[r].price * std::max(1e-9, d.mean());
            mu_total += std::max(1e-9, d.mean());
        }
        ret.demand = Distribution::normal(mu, std::max(1e-6, std::sqrt(var)));
        ret.has_demand = true;
        ret.price = price / mu_total;  // demand-weighted downstream price
        ret.demand_type = DemandType::LostSales;
        ret.backorder_penalty = 0.0;
    }
    sur.nodes.push_back(ret);

    LinkSpec sl = l;
    sl.from = "SRC";
    sl.to = ret.id;
    sur.links.push_back(sl);
    sur.finalize();
    return sur;
}

std::vector<std::pair<int, int>> default_base_stock_grid(const NetworkConfig& surrogate) {
    const auto& l = surrogate.links[0];
    const auto& d = surrogate.nodes[l.to_node].demand;
    double horizon = l.lead_time + 1.0;
    double top = 2.0 * (d.mean() * horizon + 3.0 * d.stddev() * std::sqrt(horizon));
    int hi = std::max(2, static_cast<int>(std::ceil(top)));
    std::vector<std::pair<int, int>> grid;
    for (int S = 0; S <= hi; ++S) {
        grid.push_back({S, S});  // order-up-to
        for (int gap : {2, 5, 10})
            if (S - gap >= 0) grid.push_back({S - gap, S});
    }
    std::sort(grid.begin(), grid.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });
    return grid;
}

std::pair<int, int> grid_search_base_stock(const NetworkConfig& cfg, int link,
                                           const std::vector<std::pair<int, int>>& grid,
                                           const GridSearchOptions& opt) {
    if (grid.empty()) throw std::invalid_argument("grid_search_base_stock: empty grid");
    NetworkConfig sur = base_stock_surrogate(cfg, link);

    std::vector<std::pair<int, int>> candidates = grid;
    for (const auto& [s, S] : candidates)
        if (s > S) throw std::invalid_argument("grid_search_base_stock: s > S in grid");
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });

    std::vector<double> score(candidates.size(),
                              -std::numeric_limits<double>::infinity());
    parallel_for(static_cast<int>(candidates.size()), opt.parallelism, [&](int c) {
        BaseStockParams params;
        params.reorder_point = {candidates[c].first};
        params.order_up_to = {candidates[c].second};
        double total = 0.0;
        long steps = 0;
        for (int run = 0; run < opt.runs; ++run) {
            for (int ep = 0; ep < opt.episodes; ++ep) {
                Environment env(sur, derive_seed(opt.seed, run, ep));
                BaseStockPolicy policy(sur, params);
                for (int t = 0; t < opt.steps; ++t) {
                    auto rb = env.step_fulfilled(policy.act(env.state()));
                    total += rb.total;
                    ++steps;
                }
            }
        }
        score[c] = total / steps;
    });

    size_t best = 0;
    for (size_t c = 1; c < candidates.size(); ++c)
        if (score[c] > score[best] + 1e-12) best = c;  // ties keep smaller (S, s)
    return candidates[best];
}

BaseStockParams grid_search_all_links(const NetworkConfig& cfg, const GridSearchOptions& opt) {
    BaseStockParams params;
    params.reorder_point.resize(cfg.links.size());
    params.order_up_to.resize(cfg.links.size());
    for (size_t e = 0; e < cfg.links.size(); ++e) {
        NetworkConfig sur = base_stock_surrogate(cfg, static_cast<int>(e));
        auto [s, S] = grid_search_base_stock(cfg, static_cast<int>(e),
                                             default_base_stock_grid(sur), opt);
        params.reorder_point[e] = s;
        params.order_up_to[e] = S;
    }
    return params;
}

double analytic_order_up_to(double mu, double sigma, int lead_time, double backorder_penalty,
                            double holding_cost) {
    if (sigma <= 0.0) throw std::invalid_argument("analytic_order_up_to: sigma must be > 0");
    double ratio = backorder_penalty / (backorder_penalty + holding_cost);
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("analytic_order_up_to: b/(b+h) must lie in (0,1)");
    double horizon = lead_time + 1.0;
    return mu * horizon + sigma * std::sqrt(horizon) * inverse_normal_cdf(ratio);
}

double normal_loss(double mu, double sigma, double level) {
    double z = (level - mu) / sigma;
    return sigma * (normal_pdf(z) - z * (1.0 - normal_cdf(z)));
}

double normal_loss_inverse(double mu, double sigma, double target) {
    if (target <= 0.0) return mu + 12.0 * sigma;
    double lo = mu - 10.0 * sigma - target;
    double hi = mu + 12.0 * sigma;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (normal_loss(mu, sigma, mid) > target) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-10) break;
    }
    return 0.5 * (lo + hi);
}

DALevels da_levels(const NetworkConfig& cfg) {
    DALevels lv;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    lv.retailer_level.assign(cfg.nodes.size(), nan);
    lv.warehouse_level.assign(cfg.nodes.size(), nan);
    lv.primary_link.assign(cfg.nodes.size(), -1);

    auto primary_incoming = [&](int node) {
        int best = -1;
        for (int e : cfg.incoming[node])
            if (best < 0 || cfg.links[e].lead_time < cfg.links[best].lead_time) best = e;
        return best;
    };

    // Per-warehouse accumulated shortfall from each decomposed sample path.
    std::vector<double> shortfall(cfg.nodes.size(), 0.0);
    std::vector<double> agg_mu(cfg.nodes.size(), 0.0), agg_var(cfg.nodes.size(), 0.0);
    std::vector<char> has_path(cfg.nodes.size(), 0);

    for (size_t r = 0; r < cfg.nodes.size(); ++r) {
        const auto& node = cfg.nodes[r];
        if (node.kind != NodeKind::Retailer) continue;
        if (node.demand.kind != Distribution::Kind::Normal)
            throw std::invalid_argument("da_levels: normal demand required at " + node.id);
        int e = primary_incoming(static_cast<int>(r));
        if (e < 0) throw std::invalid_argument("da_levels: retailer " + node.id +
                                               " has no incoming link");
        lv.primary_link[r] = e;
        const auto& link = cfg.links[e];
        int upstream = link.from_node;
        double mu = node.demand.mean();
        double sigma = node.demand.stddev();
        double lr = link.lead_time;
        double br = node.price - link.variable_cost;
        double hr = node.holding_cost;
        if (!(br > 0.0))
            throw std::invalid_argument("da_levels: nonpositive implied penalty at " + node.id);

        if (cfg.nodes[upstream].kind != NodeKind::Warehouse) {
            // Two-echelon: direct newsvendor fractile.
            lv.retailer_level[r] = mu * (lr + 1.0) +
                                   sigma * std::sqrt(lr + 1.0) * inverse_normal_cdf(br / (br + hr));
            continue;
        }

        int w = upstream;
        int we = primary_incoming(w);
        if (we < 0) throw std::invalid_argument("da_levels: warehouse " + cfg.nodes[w].id +
                                                " has no incoming link");
        lv.primary_link[w] = we;
        double lw = cfg.links[we].lead_time;
        double hw = cfg.nodes[w].holding_cost;
        if (!(br + hw < br + hr))
            throw std::invalid_argument("da_levels: warehouse holding cost must be below the "
                                        "retailer's at " + node.id);

        double sr = mu * (lr + 1.0) + sigma * std::sqrt(lr + 1.0) *
                                          inverse_normal_cdf((br + hw) / (br + hr));
        lv.retailer_level[r] = sr;
        double qw = normal_cdf(0.5 * inverse_normal_cdf(br / (br + hr)) +
                               0.5 * inverse_normal_cdf(br / (br + hw)));
        double swr = mu * (lr + lw + 1.0) +
                     sigma * std::sqrt(lr + lw + 1.0) * inverse_normal_cdf(qw);
        double intermediate = swr - sr;
        // Shortfall of the warehouse-lead-time demand above the intermediate level.
        shortfall[w] += normal_loss(mu * lw, sigma * std::sqrt(std::max(1e-12, lw)),
                                    intermediate);
        agg_mu[w] += mu * lw;
        agg_var[w] += sigma * sigma * lw;
        has_path[w] = 1;
    }

    for (size_t w = 0; w < cfg.nodes.size(); ++w) {
        if (!has_path[w]) continue;
        double sd = std::sqrt(std::max(1e-12, agg_var[w]));
        lv.warehouse_level[w] = normal_loss_inverse(agg_mu[w], sd, shortfall[w]);
    }
    return lv;
}

Action da_action(const NetworkConfig& cfg, const DALevels& levels, const PipelineState& state) {
    Action a = Action::zeros(cfg.links.size());
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        int e = levels.primary_link[n];
        if (e < 0) continue;
        double level = cfg.nodes[n].kind == NodeKind::Retailer ? levels.retailer_level[n]
                                                               : levels.warehouse_level[n];
        if (std::isnan(level)) continue;
        const auto& link = cfg.links[e];
        double ip = inventory_position(cfg, state, static_cast<int>(n), link.lead_time);
        long long order = discretize(level - ip);
        a.qty[e] = static_cast<int>(std::min<long long>(order, link.max_order));
    }
    return a;
}

std::string dump_base_stock(const NetworkConfig& cfg, const BaseStockParams& params) {
    std::ostringstream out;
    for (size_t e = 0; e < cfg.links.size(); ++e) {
        nlohmann::json row = {{"link", cfg.links[e].from + "->" + cfg.links[e].to},
                              {"s", params.reorder_point[e]},
                              {"S", params.order_up_to[e]}};
        out << row.dump() << '\n';
    }
    return out.str();
}

BaseStockParams load_base_stock(const NetworkConfig& cfg, const std::string& text) {
    BaseStockParams params;
    params.reorder_point.assign(cfg.links.size(), 0);
    params.order_up_to.assign(cfg.links.size(), 0);
    std::istringstream in(text);
    std::string line;
    std::vector<char> seen(cfg.links.size(), 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = nlohmann::json::parse(line);
        std::string name = row.at("link");
        auto arrow = name.find("->");
        if (arrow == std::string::npos)
            throw std::invalid_argument("load_base_stock: bad link name " + name);
        std::string from = name.substr(0, arrow), to = name.substr(arrow + 2);
        int found = -1;
        for (size_t e = 0; e < cfg.links.size(); ++e)
            if (cfg.links[e].from == from && cfg.links[e].to == to) found = static_cast<int>(e);
        if (found < 0) throw std::invalid_argument("load_base_stock: unknown link " + name);
        params.reorder_point[found] = row.at("s");
        params.order_up_to[found] = row.at("S");
        seen[found] = 1;
    }
    for (size_t e = 0; e < cfg.links.size(); ++e)
        if (!seen[e])
            throw std::invalid_argument("load_base_stock: missing parameters for link " +
                                        cfg.links[e].from + "->" + cfg.links[e].to);
    return params;
}

std::string dump_da_levels(const NetworkConfig& cfg, const DALevels& levels) {
    std::ostringstream out;
    for (size_t n = 0; n < cfg.nodes.size(); ++n) {
        double level = cfg.nodes[n].kind == NodeKind::Retailer ? levels.retailer_level[n]
                                                               : levels.warehouse_level[n];
        if (std::isnan(level)) continue;
        nlohmann::json row = {{"node", cfg.nodes[n].id}, {"level", level}};
        out << row.dump() << '\n';
    }
    return out.str();
}

}  // namespace parl
