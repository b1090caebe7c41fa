#include "parl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace parl {

int NetworkConfig::node_index(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return static_cast<int>(i);
    return -1;
}

void NetworkConfig::finalize() {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };

    if (nodes.empty()) fail("no nodes declared");
    {
        std::set<std::string> seen;
        for (const auto& n : nodes)
            if (!seen.insert(n.id).second) fail("duplicate node id: " + n.id);
    }
    for (const auto& n : nodes) {
        if (n.holding_cost < 0) fail("negative holding_cost at node " + n.id);
        if (n.spillage_cost < 0) fail("negative spillage_cost at node " + n.id);
        if (n.price < 0) fail("negative price at node " + n.id);
        if (n.capacity < 0) fail("negative capacity at node " + n.id);
        if (n.backorder_penalty < 0) fail("negative backorder_penalty at node " + n.id);
        if (n.kind == NodeKind::Retailer && !n.has_demand)
            fail("retailer " + n.id + " has no demand distribution");
        if (n.kind != NodeKind::Retailer && n.has_demand)
            fail("demand distribution on non-retailer " + n.id);
        if (n.kind == NodeKind::Supplier && !n.has_production && !n.infinite_supply)
            fail("supplier " + n.id + " has neither production nor infinite_supply");
        if (n.kind != NodeKind::Supplier && (n.has_production || n.infinite_supply))
            fail("production fields on non-supplier " + n.id);
        if (!n.infinite_supply && !std::isfinite(n.capacity))
            fail("node " + n.id + " needs a finite capacity");
    }

    incoming.assign(nodes.size(), {});
    outgoing.assign(nodes.size(), {});
    for (size_t e = 0; e < links.size(); ++e) {
        auto& l = links[e];
        l.from_node = node_index(l.from);
        l.to_node = node_index(l.to);
        if (l.from_node < 0) fail("link references undeclared node " + l.from);
        if (l.to_node < 0) fail("link references undeclared node " + l.to);
        if (l.from_node == l.to_node) fail("self-link at node " + l.from);
        if (l.lead_time < 0) fail("negative lead_time on link " + l.from + "->" + l.to);
        if (l.fixed_cost < 0 || l.variable_cost < 0)
            fail("negative cost on link " + l.from + "->" + l.to);
        if (l.max_order <= 0) fail("link " + l.from + "->" + l.to + " needs max_order > 0");
        if (l.min_order < 0 || l.min_order > l.max_order)
            fail("link " + l.from + "->" + l.to + " violates 0 <= min_order <= max_order");
        if (nodes[l.to_node].infinite_supply)
            fail("link into infinite-supply node " + l.to);
        incoming[l.to_node].push_back(static_cast<int>(e));
        outgoing[l.from_node].push_back(static_cast<int>(e));
    }

    // Every retailer must be reachable from some supplier.
    {
        std::vector<char> reach(nodes.size(), 0);
        std::deque<int> queue;
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].kind == NodeKind::Supplier) {
                reach[i] = 1;
                queue.push_back(static_cast<int>(i));
            }
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int e : outgoing[v])
                if (!reach[links[e].to_node]) {
                    reach[links[e].to_node] = 1;
                    queue.push_back(links[e].to_node);
                }
        }
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].kind == NodeKind::Retailer && !reach[i])
                fail("retailer " + nodes[i].id + " unreachable from any supplier");
    }

    max_lead.assign(nodes.size(), 0);
    for (const auto& l : links)
        max_lead[l.to_node] = std::max(max_lead[l.to_node], l.lead_time);

    // State layout: pipeline slots per tracked node (declaration order),
    // followed by the node's backlog dimension when it can backorder.
    state_dims.clear();
    for (size_t n = 0; n < nodes.size(); ++n) {
        if (!tracked(static_cast<int>(n))) continue;
        for (int j = 0; j <= max_lead[n]; ++j) {
            StateDim d;
            d.node = static_cast<int>(n);
            d.slot = j;
            d.lower = 0.0;
            if (j == 0) {
                d.upper = nodes[n].capacity;
            } else {
                double ub = 0.0;  // slot j can only hold orders from links with L >= j
                for (int e : incoming[n])
                    if (links[e].lead_time >= j) ub += links[e].max_order;
                d.upper = ub;
            }
            d.name = nodes[n].id + ".I" + std::to_string(j);
            state_dims.push_back(d);
        }
        if (nodes[n].kind == NodeKind::Retailer && nodes[n].demand_type == DemandType::Backorder) {
            StateDim d;
            d.node = static_cast<int>(n);
            d.is_backlog = true;
            d.lower = 0.0;
            d.upper = backlog_cap;
            d.name = nodes[n].id + ".backlog";
            state_dims.push_back(d);
        }
    }
}

namespace {

bool valid_id(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// "R1..R10" -> {R1,...,R10}; a plain id yields itself.
std::vector<std::string> expand_id_range(const std::string& token, int line) {
    auto dots = token.find("..");
    if (dots == std::string::npos) {
        if (!valid_id(token)) throw ConfigError(line, "invalid identifier '" + token + "'");
        return {token};
    }
    std::string lo = token.substr(0, dots), hi = token.substr(dots + 2);
    auto split_num = [&](const std::string& id) -> std::pair<std::string, long> {
        size_t p = id.size();
        while (p > 0 && std::isdigit(static_cast<unsigned char>(id[p - 1]))) --p;
        if (p == id.size()) throw ConfigError(line, "range endpoint '" + id + "' lacks a number");
        return {id.substr(0, p), std::stol(id.substr(p))};
    };
    auto [pl, nl] = split_num(lo);
    auto [ph, nh] = split_num(hi);
    if (pl != ph) throw ConfigError(line, "range endpoints '" + lo + "'..'" + hi +
                                              "' have different prefixes");
    if (nh < nl) throw ConfigError(line, "descending id range '" + token + "'");
    std::vector<std::string> out;
    for (long v = nl; v <= nh; ++v) out.push_back(pl + std::to_string(v));
    for (const auto& id : out)
        if (!valid_id(id)) throw ConfigError(line, "invalid identifier '" + id + "'");
    return out;
}

// "[a,b,c]" -> {a,b,c}; bare values yield a singleton. Splits at top-level
// commas only, so distribution arguments survive: [normal(2,10),const(3)].
std::vector<std::string> split_values(const std::string& value, int line) {
    std::string v = trim(value);
    bool bracketed = !v.empty() && v.front() == '[';
    if (bracketed) {
        if (v.back() != ']') throw ConfigError(line, "unterminated list");
        v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : v) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || parts.empty()) parts.push_back(trim(cur));
    if (!bracketed && parts.size() > 1)
        throw ConfigError(line, "list values must be bracketed: [" + value + "]");
    for (const auto& p : parts)
        if (p.empty()) throw ConfigError(line, "empty list element");
    return parts;
}

struct RawSection {
    std::string header;
    int line;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> entries;  // key -> (value, line)
};

double parse_number(const std::string& s, int line) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + s + "'");
    }
}

int parse_int(const std::string& s, int line) {
    double v = parse_number(s, line);
    if (v != std::floor(v)) throw ConfigError(line, "expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

Distribution parse_dist(const std::string& s, int line) {
    try {
        return parse_distribution(s);
    } catch (const std::exception& e) {
        throw ConfigError(line, e.what());
    }
}

void apply_node_key(NodeSpec& n, const std::string& key, const std::string& value, int line) {
    if (key == "kind") {
        if (value == "supplier") n.kind = NodeKind::Supplier;
        else if (value == "warehouse") n.kind = NodeKind::Warehouse;
        else if (value == "retailer") n.kind = NodeKind::Retailer;
        else throw ConfigError(line, "unknown node kind '" + value + "'");
    } else if (key == "holding_cost") {
        n.holding_cost = parse_number(value, line);
    } else if (key == "capacity") {
        n.capacity = value == "inf" ? std::numeric_limits<double>::infinity()
                                    : parse_number(value, line);
    } else if (key == "spillage_cost") {
        n.spillage_cost = parse_number(value, line);
    } else if (key == "price") {
        n.price = parse_number(value, line);
    } else if (key == "demand" || key == "demand_dist") {
        n.demand = parse_dist(value, line);
        n.has_demand = true;
    } else if (key == "demand_type") {
        if (value == "lost_sales") n.demand_type = DemandType::LostSales;
        else if (value == "backorder") n.demand_type = DemandType::Backorder;
        else throw ConfigError(line, "unknown demand_type '" + value + "'");
    } else if (key == "backorder_penalty") {
        n.backorder_penalty = parse_number(value, line);
    } else if (key == "production") {
        n.production = parse_dist(value, line);
        n.has_production = true;
    } else if (key == "infinite_supply") {
        if (value == "true") n.infinite_supply = true;
        else if (value == "false") n.infinite_supply = false;
        else throw ConfigError(line, "expected true/false for infinite_supply");
    } else {
        throw ConfigError(line, "unknown node key '" + key + "'");
    }
}

void apply_link_key(LinkSpec& l, const std::string& key, const std::string& value, int line) {
    if (key == "lead_time") l.lead_time = parse_int(value, line);
    else if (key == "fixed_cost") l.fixed_cost = parse_number(value, line);
    else if (key == "variable_cost") l.variable_cost = parse_number(value, line);
    else if (key == "max_order") l.max_order = parse_int(value, line);
    else if (key == "min_order") l.min_order = parse_int(value, line);
    else throw ConfigError(line, "unknown link key '" + key + "'");
}

}  // namespace

NetworkConfig parse_config(const std::string& text) {
    std::vector<RawSection> sections;
    {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        RawSection* cur = nullptr;
        while (std::getline(in, raw)) {
            ++line_no;
            auto hash = raw.find_first_of("#;");
            std::string stripped = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (stripped.empty()) continue;
            if (stripped.front() == '[') {
                if (stripped.back() != ']')
                    throw ConfigError(line_no, "unterminated section header");
                sections.push_back({trim(stripped.substr(1, stripped.size() - 2)), line_no, {}});
                cur = &sections.back();
                continue;
            }
            auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError(line_no, "expected 'key = value'");
            if (!cur) throw ConfigError(line_no, "key outside of any section");
            cur->entries.push_back(
                {trim(stripped.substr(0, eq)), {trim(stripped.substr(eq + 1)), line_no}});
        }
    }

    NetworkConfig cfg;
    for (const auto& sec : sections) {
        std::vector<std::string> parts;
        {
            std::string cur;
            for (char c : sec.header) {
                if (c == '.') {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            parts.push_back(cur);
        }

        if (parts[0] == "network" && parts.size() == 1) {
            for (const auto& [key, vl] : sec.entries) {
                const auto& [value, line] = vl;
                if (key == "name") cfg.name = value;
                else if (key == "initial_inventory") cfg.initial_inventory = parse_dist(value, line);
                else if (key == "backlog_cap") cfg.backlog_cap = parse_number(value, line);
                else throw ConfigError(line, "unknown network key '" + key + "'");
            }
        } else if (parts[0] == "node" && parts.size() == 2) {
            auto ids = expand_id_range(parts[1], sec.line);
            size_t base = cfg.nodes.size();
            for (const auto& id : ids) {
                NodeSpec n;
                n.id = id;
                cfg.nodes.push_back(n);
            }
            for (const auto& [key, vl] : sec.entries) {
                const auto& [value, line] = vl;
                auto values = split_values(value, line);
                for (size_t i = 0; i < ids.size(); ++i)
                    apply_node_key(cfg.nodes[base + i], key, values[i % values.size()], line);
            }
        } else if (parts[0] == "link" && parts.size() == 3) {
            auto froms = expand_id_range(parts[1], sec.line);
            auto tos = expand_id_range(parts[2], sec.line);
            if (froms.size() > 1 && tos.size() > 1)
                throw ConfigError(sec.line, "only one side of a link section may be a range");
            size_t count = std::max(froms.size(), tos.size());
            size_t base = cfg.links.size();
            for (size_t i = 0; i < count; ++i) {
                LinkSpec l;
                l.from = froms[i % froms.size()];
                l.to = tos[i % tos.size()];
                cfg.links.push_back(l);
            }
            for (const auto& [key, vl] : sec.entries) {
                const auto& [value, line] = vl;
                auto values = split_values(value, line);
                for (size_t i = 0; i < count; ++i)
                    apply_link_key(cfg.links[base + i], key, values[i % values.size()], line);
            }
        } else {
            throw ConfigError(sec.line, "unknown section '" + sec.header + "'");
        }
    }

    try {
        cfg.finalize();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return cfg;
}

NetworkConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace parl
