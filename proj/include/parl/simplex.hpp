#pragma once

#include <vector>

#include "parl/milp_model.hpp"

namespace parl {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;  // structural variables only
    int pivots = 0;
};

// Solves the LP relaxation of the model (integrality dropped) with a
// dense bounded-variable two-phase simplex. Dantzig pricing with a
// Bland's-rule fallback after a run of degenerate pivots. Throws
// std::runtime_error if the pivot budget is exhausted (numerical stall).
LpResult solve_lp(const MilpModel& model);

// Same, with per-variable bound overrides (used by branch and bound).
LpResult solve_lp(const MilpModel& model, const std::vector<double>& lower,
                  const std::vector<double>& upper);

}  // namespace parl
