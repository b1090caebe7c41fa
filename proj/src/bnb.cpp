#include "parl/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "parl/simplex.hpp"

namespace parl {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    double bound = 0.0;  // LP relaxation value
    long id = 0;
    int depth = 0;
    std::vector<double> lower, upper;
    std::vector<double> point;  // LP optimal point

    // Best-first on the bound; ties resolved by creation order.
    bool operator<(const Node& other) const {
        if (bound != other.bound) return bound < other.bound;
        return id > other.id;
    }
};

// Most fractional variable, binaries first.
int pick_branch_var(const MilpModel& model, const std::vector<double>& x, double tol) {
    int best = -1;
    double best_score = -1.0;
    bool best_binary = false;
    for (size_t j = 0; j < model.vars.size(); ++j) {
        if (model.vars[j].kind == VarKind::Continuous) continue;
        double frac = x[j] - std::floor(x[j]);
        double dist = std::min(frac, 1.0 - frac);
        if (dist <= tol) continue;
        bool binary = model.vars[j].kind == VarKind::Binary;
        if (best < 0 || (binary && !best_binary) ||
            (binary == best_binary && dist > best_score + 1e-12)) {
            best = static_cast<int>(j);
            best_score = dist;
            best_binary = binary;
        }
    }
    return best;
}

}  // namespace

MipResult solve_branch_and_bound(const MilpModel& model, const BnbOptions& opt) {
    const auto t0 = Clock::now();
    const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(opt.time_limit_seconds));
    auto timed_out = [&] { return Clock::now() >= deadline; };

    MipResult result;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    double incumbent_obj = neg_inf;
    std::vector<double> incumbent;

    long next_id = 0;
    long lp_solves = 0;
    long nodes_explored = 0;

    auto make_root_bounds = [&](std::vector<double>* lo, std::vector<double>* hi) {
        lo->resize(model.vars.size());
        hi->resize(model.vars.size());
        for (size_t j = 0; j < model.vars.size(); ++j) {
            (*lo)[j] = model.vars[j].lower;
            (*hi)[j] = model.vars[j].upper;
        }
    };

    // Solves the node LP; returns false if pruned (infeasible).
    auto evaluate = [&](Node& node) {
        ++lp_solves;
        LpResult lp = solve_lp(model, node.lower, node.upper);
        if (lp.status == LpStatus::Infeasible) return false;
        if (lp.status == LpStatus::Unbounded)
            throw std::runtime_error("solve_branch_and_bound: unbounded relaxation, "
                                     "model is not fully boxed");
        node.bound = lp.objective;
        node.point = std::move(lp.x);
        return true;
    };

    auto try_incumbent = [&](const Node& node) {
        if (pick_branch_var(model, node.point, opt.integrality_tol) >= 0) return false;
        // Round the integer coordinates exactly and accept.
        std::vector<double> x = node.point;
        for (size_t j = 0; j < model.vars.size(); ++j)
            if (model.vars[j].kind != VarKind::Continuous) x[j] = std::round(x[j]);
        double obj = model.eval_objective(x);
        if (obj > incumbent_obj) {
            incumbent_obj = obj;
            incumbent = std::move(x);
        }
        return true;
    };

    Node root;
    root.id = next_id++;
    make_root_bounds(&root.lower, &root.upper);
    if (!evaluate(root)) {
        result.status = MipStatus::Infeasible;
        result.lp_solves = lp_solves;
        return result;
    }

    std::priority_queue<Node> open;
    if (!try_incumbent(root)) open.push(std::move(root));

    while (!open.empty()) {
        if (incumbent_obj > neg_inf && open.top().bound <= incumbent_obj + opt.gap_tol) break;
        if (timed_out()) break;
        Node current = open.top();
        open.pop();

        // Depth-first plunge from the popped node until pruned or integral,
        // pushing the sibling of each chosen child.
        while (true) {
            ++nodes_explored;
            int var = pick_branch_var(model, current.point, opt.integrality_tol);
            if (var < 0) {
                try_incumbent(current);
                break;
            }
            double value = current.point[var];
            Node down = current;
            down.id = next_id++;
            down.depth = current.depth + 1;
            down.upper[var] = std::floor(value);
            Node up = current;
            up.id = next_id++;
            up.depth = current.depth + 1;
            up.lower[var] = std::ceil(value);

            bool down_ok = evaluate(down);
            bool up_ok = evaluate(up);
            if (down_ok && incumbent_obj > neg_inf && down.bound <= incumbent_obj + opt.gap_tol)
                down_ok = false;
            if (up_ok && incumbent_obj > neg_inf && up.bound <= incumbent_obj + opt.gap_tol)
                up_ok = false;
            if (down_ok && try_incumbent(down)) down_ok = false;
            if (up_ok && try_incumbent(up)) up_ok = false;

            if (down_ok && up_ok) {
                if (down.bound >= up.bound) {
                    open.push(std::move(up));
                    current = std::move(down);
                } else {
                    open.push(std::move(down));
                    current = std::move(up);
                }
            } else if (down_ok) {
                current = std::move(down);
            } else if (up_ok) {
                current = std::move(up);
            } else {
                break;
            }
            if (timed_out()) {
                open.push(std::move(current));  // keep its bound for gap reporting
                break;
            }
        }
    }

    result.nodes = nodes_explored;
    result.lp_solves = lp_solves;
    double best_open_bound = incumbent_obj;
    if (!open.empty()) best_open_bound = std::max(best_open_bound, open.top().bound);

    if (incumbent.empty()) {
        result.status = open.empty() ? MipStatus::Infeasible : MipStatus::TimeLimit;
        result.bound = open.empty() ? neg_inf : best_open_bound;
        result.gap = std::numeric_limits<double>::infinity();
        return result;
    }
    result.x = std::move(incumbent);
    result.objective = incumbent_obj;
    bool exhausted = open.empty() || best_open_bound <= incumbent_obj + opt.gap_tol;
    if (exhausted) {
        result.status = MipStatus::Optimal;
        result.bound = incumbent_obj;
        result.gap = 0.0;
    } else {
        result.status = MipStatus::TimeLimit;
        result.bound = best_open_bound;
        result.gap = best_open_bound - incumbent_obj;
    }
    return result;
}

}  // namespace parl
