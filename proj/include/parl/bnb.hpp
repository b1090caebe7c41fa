#pragma once

#include <vector>

#include "parl/milp_model.hpp"

namespace parl {

enum class MipStatus { Optimal, TimeLimit, Infeasible };

struct MipResult {
    MipStatus status = MipStatus::Infeasible;
    double objective = 0.0;
    double bound = 0.0;      // best proven upper bound
    double gap = 0.0;        // bound - objective (0 when optimal)
    std::vector<double> x;   // incumbent point, empty if none
    long nodes = 0;
    long lp_solves = 0;
};

struct BnbOptions {
    double time_limit_seconds = 60.0;  // mirrors the per-decision solver budget
    double integrality_tol = 1e-6;
    double gap_tol = 1e-9;
};

// Best-first branch and bound with depth-first plunging for early
// incumbents. Branches on the most fractional variable, binaries before
// general integers. Deterministic for a fixed model.
MipResult solve_branch_and_bound(const MilpModel& model, const BnbOptions& opt = {});

}  // namespace parl
