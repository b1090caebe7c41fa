#pragma once

#include <stdexcept>
#include <vector>

#include "parl/relu_net.hpp"
#include "parl/sampling.hpp"
#include "parl/simulator.hpp"

namespace parl {

// SAA objective of one action: sum_i w_i [ R(s,a,d_i) + gamma V(T(s,a,d_i)) ],
// evaluated through the simulator transition and a forward pass (net optional).
double saa_objective(const NetworkConfig& cfg, const PipelineState& state, const Action& action,
                     const SampleSet& samples, const ReluNet* net, double gamma);

struct EnumerationCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;  // caller should use branch and bound
};

struct EnumerationResult {
    Action action;
    double objective = 0.0;
    long long evaluated = 0;
};

// Exhaustive argmax over all supply-feasible integer actions, ties broken
// toward the lexicographically smallest action vector. Throws
// EnumerationCapExceeded when prod_links (U^H - U^L + 1) exceeds the cap.
EnumerationResult solve_enumeration(const NetworkConfig& cfg, const PipelineState& state,
                                    const SampleSet& samples, const ReluNet* net, double gamma,
                                    long long cap = 1000000);

// Size of the action box, saturating at a large sentinel.
long long action_box_size(const NetworkConfig& cfg);

}  // namespace parl
