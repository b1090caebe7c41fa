#pragma once

#include <string>
#include <vector>

#include "parl/policy.hpp"
#include "parl/simulator.hpp"

namespace parl {

// Per-link (s, S) base stock parameters.
struct BaseStockParams {
    std::vector<int> reorder_point;  // s, per link
    std::vector<int> order_up_to;    // S, per link
};

// Per link: inventory position over the link's lead-time horizon; order
// max(0, S - IP) when IP <= s, clipped to [0, U^H].
Action base_stock_action(const NetworkConfig& cfg, const BaseStockParams& params,
                         const PipelineState& state);

class BaseStockPolicy : public Policy {
  public:
    BaseStockPolicy(const NetworkConfig& cfg, BaseStockParams params)
        : cfg_(&cfg), params_(std::move(params)) {}
    Action act(const PipelineState& state) override {
        return base_stock_action(*cfg_, params_, state);
    }
    std::string name() const override { return "base-stock"; }

  private:
    const NetworkConfig* cfg_;
    BaseStockParams params_;
};

// Single-link surrogate with unconstrained upstream supply; warehouses
// are treated as retailers facing the summed downstream demand.
NetworkConfig base_stock_surrogate(const NetworkConfig& cfg, int link);

struct GridSearchOptions {
    int runs = 3;
    int episodes = 4;
    int steps = 256;
    std::uint64_t seed = 1;
    int parallelism = 8;
};

// Simulates every candidate (s, S) pair on the surrogate with shared
// seeds and returns the mean-reward argmax; ties prefer smaller S, then
// smaller s. Throws on an empty grid.
std::pair<int, int> grid_search_base_stock(const NetworkConfig& cfg, int link,
                                           const std::vector<std::pair<int, int>>& grid,
                                           const GridSearchOptions& opt);

// Order-up-to candidates (s = S) covering mean lead-time demand plus a
// safety band, used when no explicit grid is given.
std::vector<std::pair<int, int>> default_base_stock_grid(const NetworkConfig& surrogate);

// Grid search on every link of the network.
BaseStockParams grid_search_all_links(const NetworkConfig& cfg, const GridSearchOptions& opt);

// Newsvendor-style order-up-to level F^-1_{N(mu(L+1), sigma sqrt(L+1))}(b/(b+h)).
double analytic_order_up_to(double mu, double sigma, int lead_time, double backorder_penalty,
                            double holding_cost);

// Normal loss function Q(S) = E[D - S]+ and its inverse in S.
double normal_loss(double mu, double sigma, double level);
double normal_loss_inverse(double mu, double sigma, double target);

// Decomposition-aggregation echelon order-up-to levels.
struct DALevels {
    // Indexed by node; NaN when the node has no level.
    std::vector<double> retailer_level;   // S_r
    std::vector<double> warehouse_level;  // S_w
    std::vector<int> primary_link;        // per node: link used for ordering, -1 if none
};

DALevels da_levels(const NetworkConfig& cfg);

// Order-up-to on local inventory positions, floored at 0 and clipped to
// the link bounds; orders flow on each node's primary link.
Action da_action(const NetworkConfig& cfg, const DALevels& levels, const PipelineState& state);

class DaPolicy : public Policy {
  public:
    DaPolicy(const NetworkConfig& cfg, DALevels levels) : cfg_(&cfg), levels_(std::move(levels)) {}
    Action act(const PipelineState& state) override { return da_action(*cfg_, levels_, state); }
    std::string name() const override { return "da"; }

  private:
    const NetworkConfig* cfg_;
    DALevels levels_;
};

// JSON-lines dump/load of heuristic parameters (link -> (s,S), node -> level).
std::string dump_base_stock(const NetworkConfig& cfg, const BaseStockParams& params);
BaseStockParams load_base_stock(const NetworkConfig& cfg, const std::string& text);
std::string dump_da_levels(const NetworkConfig& cfg, const DALevels& levels);

}  // namespace parl
