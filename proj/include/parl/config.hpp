#pragma once

#include <limits>
#include <string>
#include <vector>

#include "parl/distribution.hpp"

namespace parl {

enum class NodeKind { Supplier, Warehouse, Retailer };
enum class DemandType { LostSales, Backorder };

struct NodeSpec {
    std::string id;
    NodeKind kind = NodeKind::Retailer;
    double holding_cost = 0.0;                              // h_l
    double capacity = std::numeric_limits<double>::infinity();  // U-bar_l
    double spillage_cost = 0.0;                             // delta_l
    double price = 0.0;                                     // p_l (retailers)
    Distribution demand;                                    // retailers
    bool has_demand = false;
    DemandType demand_type = DemandType::LostSales;
    double backorder_penalty = 0.0;                         // b (backorder retailers)
    Distribution production;                                // suppliers
    bool has_production = false;
    bool infinite_supply = false;  // supplier with unbounded stock, not in the state
};

struct LinkSpec {
    std::string from, to;
    int from_node = -1, to_node = -1;  // resolved indices
    int lead_time = 0;                 // L
    double fixed_cost = 0.0;           // K
    double variable_cost = 0.0;        // C
    int max_order = 0;                 // U^H
    int min_order = 0;                 // U^L
};

// One dimension of the flattened state vector used by the critic and
// the MILP: a pipeline slot of a node, or a retailer backlog counter.
struct StateDim {
    int node = -1;
    int slot = -1;           // pipeline slot index, -1 for backlog dims
    bool is_backlog = false;
    double lower = 0.0, upper = 0.0;
    std::string name;
};

struct NetworkConfig {
    std::string name;
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    Distribution initial_inventory = Distribution::uniform(0, 4);
    double backlog_cap = 500.0;  // box upper bound for backlog state dims

    // Derived by finalize():
    std::vector<std::vector<int>> incoming;  // link indices into each node
    std::vector<std::vector<int>> outgoing;  // link indices out of each node
    std::vector<int> max_lead;               // pipeline length - 1 per node
    std::vector<StateDim> state_dims;

    int node_index(const std::string& id) const;
    bool tracked(int node) const { return !nodes[node].infinite_supply; }
    int state_size() const { return static_cast<int>(state_dims.size()); }

    // Resolves link endpoints, builds adjacency, pipeline lengths and the
    // state layout; validates all invariants. Throws std::invalid_argument.
    void finalize();
};

// Raised by parse_config with a 1-based line number attached.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// Parses the section/key-value configuration format:
//
//   [network]
//   initial_inventory = uniform(0,4)
//
//   [node.S]
//   kind = supplier
//   production = const(10)
//
//   [node.R1..R3]            # declares R1,R2,R3; list values cycle
//   kind = retailer
//   demand = [normal(2,10)]
//   holding_cost = [1,2,4]
//
//   [link.S.R1..R3]
//   lead_time = [1,2,3]
//   max_order = [50]
//
NetworkConfig parse_config(const std::string& text);

NetworkConfig load_config_file(const std::string& path);

}  // namespace parl
