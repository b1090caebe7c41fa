#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parl/milp_model.hpp"
#include "parl/relu_net.hpp"
#include "parl/simulator.hpp"

namespace parl {

// Result of encoding one ReLU network copy into a model.
struct EncodedNet {
    std::vector<int> output_vars;  // post-activation variables of the last hidden layer
    int binaries = 0;
    int fixed_neurons = 0;  // neurons resolved by their interval bounds
};

// Appends the big-M representation of `net` to `model`. `input_vars`
// must already exist with box bounds matching the box used to propagate
// `bounds`. Neurons whose interval bounds pin them (M+ <= 0 or M- >= 0)
// are emitted as a single equality without a binary.
EncodedNet encode_network(MilpModel& model, const ReluNet& net, const LayerBounds& bounds,
                          const std::vector<int>& input_vars, const std::string& suffix);

struct StepProblemOptions {
    bool relax_integrality = false;  // diagnostic: continuous shipments
    bool salvage_all_slots = false;  // emit salvage variables for every pipeline slot
};

// The per-step MILP: shared shipment/order variables, one copy of the
// sales/transition/network variables per demand sample, SAA-weighted
// objective sum_i w_i [ R(I,x,d_i) + gamma c.z_i ].
struct StepProblem {
    MilpModel model;
    std::vector<int> x_vars;                         // per link
    std::vector<int> g_vars;                         // per link
    std::vector<std::vector<int>> next_state_vars;   // per sample, state_dims order
    std::vector<EncodedNet> nets;                    // per sample (empty without a net)
    double gamma = 0.0;

    Action extract_action(const std::vector<double>& point) const;
};

StepProblem build_step_problem(const NetworkConfig& cfg, const PipelineState& state,
                               const std::vector<Realization>& samples,
                               const std::vector<double>& weights, const ReluNet* net,
                               const LayerBounds* bounds, double gamma,
                               const StepProblemOptions& opt = {});

// Box of the flattened state vector implied by the environment.
void state_box(const NetworkConfig& cfg, std::vector<double>* lo, std::vector<double>* hi);

// Per-dimension input scale for critics on this environment (the box
// upper bounds, floored at one).
std::vector<double> critic_input_scale(const NetworkConfig& cfg);

}  // namespace parl
