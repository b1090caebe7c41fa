#include "parl/presets.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace parl {

namespace {

const char* kRetailBlock3 = R"(
[node.R1..R3]
kind = retailer
demand = [normal(2,10)]
price = [50]
holding_cost = [1,2,4]
capacity = [50]
spillage_cost = [10]
)";

const std::map<std::string, std::string> kPresets = {
    {"1s-3r", std::string(R"(
[network]
name = 1s-3r
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(10)
capacity = 100
spillage_cost = 10
)") + kRetailBlock3 + R"(
[link.S.R1..R3]
lead_time = [1,2,3]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]
)"},

    {"1s-3r-high", std::string(R"(
[network]
name = 1s-3r-high
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(15)
capacity = 100
spillage_cost = 10
)") + kRetailBlock3 + R"(
[link.S.R1..R3]
lead_time = [1,2,3]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]
)"},

    {"1s-10r", R"(
[network]
name = 1s-10r
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(25)
capacity = 150
spillage_cost = 10

[node.R1..R10]
kind = retailer
demand = [normal(2,10)]
price = [50]
holding_cost = [1,2,4,8]
capacity = [50]
spillage_cost = [10]

[link.S.R1..R10]
lead_time = [1,2,3]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]
)"},

    {"1s-20r", R"(
[network]
name = 1s-20r
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(40)
capacity = 300
spillage_cost = 10

[node.R1..R20]
kind = retailer
demand = [normal(2,10)]
price = [50]
holding_cost = [1,2,4,8]
capacity = [50]
spillage_cost = [10]

[link.S.R1..R20]
lead_time = [1,2,3]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]
)"},

    {"1s-2w-3r", std::string(R"(
[network]
name = 1s-2w-3r
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(10)
capacity = 100
spillage_cost = 10

[node.W1..W2]
kind = warehouse
holding_cost = [0.5]
capacity = [150]
spillage_cost = [10]
)") + kRetailBlock3 + R"(
[link.S.W1..W2]
lead_time = [2]
fixed_cost = [0]
variable_cost = [0]
max_order = [50]

[link.W1.R1..R2]
lead_time = [1,2]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]

[link.W2.R3]
lead_time = 3
fixed_cost = 50
variable_cost = 0
max_order = 50
)"},

    {"1s-2w-3r-ds", std::string(R"(
[network]
name = 1s-2w-3r-ds
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(10)
capacity = 100
spillage_cost = 10

[node.W1..W2]
kind = warehouse
holding_cost = [0.5,0.1]
capacity = [150]
spillage_cost = [10]
)") + kRetailBlock3 + R"(
[link.S.W1..W2]
lead_time = [2]
fixed_cost = [0]
variable_cost = [0]
max_order = [50]

[link.W1.R1..R3]
lead_time = [1,2,3]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]

[link.W2.R1..R3]
lead_time = [5,6,7]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]
)"},

    {"1sinf-2w-3r", std::string(R"(
[network]
name = 1sinf-2w-3r
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
infinite_supply = true

[node.W1..W2]
kind = warehouse
holding_cost = [0.5]
capacity = [150]
spillage_cost = [10]
)") + kRetailBlock3 + R"(
[link.S.W1..W2]
lead_time = [2]
fixed_cost = [0]
variable_cost = [20]
max_order = [50]

[link.W1.R1..R2]
lead_time = [1,2]
fixed_cost = [50]
variable_cost = [0]
max_order = [50]

[link.W2.R3]
lead_time = 3
fixed_cost = 50
variable_cost = 0
max_order = 50
)"},

    // Single retailer with unconstrained supply, backordered demand and no
    // fixed costs; the order-up-to benchmark environment.
    {"1sinf-1r", R"(
[network]
name = 1sinf-1r
initial_inventory = uniform(0,4)
backlog_cap = 300

[node.S]
kind = supplier
infinite_supply = true

[node.R1]
kind = retailer
demand = normal(5,0.8)
price = 0
holding_cost = 0.8
capacity = 100
spillage_cost = 10
demand_type = backorder
backorder_penalty = 7

[link.S.R1]
lead_time = 4
fixed_cost = 0
variable_cost = 0
max_order = 50
)"},

    // Small single-link instance for fast tests.
    {"smoke-1s-1r", R"(
[network]
name = smoke-1s-1r
initial_inventory = uniform(0,4)

[node.S]
kind = supplier
production = const(10)
capacity = 100
spillage_cost = 10

[node.R1]
kind = retailer
demand = normal(2,10)
price = 50
holding_cost = 1
capacity = 50
spillage_cost = 10

[link.S.R1]
lead_time = 1
fixed_cost = 50
variable_cost = 0
max_order = 10
)"},
};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : kPresets) names.push_back(name);
    return names;
}

bool is_preset(const std::string& name) { return kPresets.count(name) > 0; }

std::string preset_config_text(const std::string& name) {
    auto it = kPresets.find(name);
    if (it == kPresets.end()) throw std::invalid_argument("unknown preset: " + name);
    return it->second;
}

NetworkConfig make_preset(const std::string& name, bool desk) {
    NetworkConfig cfg = parse_config(preset_config_text(name));
    if (desk && name != "1sinf-1r" && name != "smoke-1s-1r") {
        for (auto& l : cfg.links) l.max_order = std::min(l.max_order, 10);
        cfg.finalize();  // state boxes depend on the order bounds
    }
    return cfg;
}

}  // namespace parl
