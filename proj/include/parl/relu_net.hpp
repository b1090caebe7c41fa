#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "parl/rng.hpp"

namespace parl {

// Feed-forward ReLU value function: hidden layers with ReLU activation,
// linear scalar output c.z. Inputs are divided by a fixed per-dimension
// scale so the MILP encoding can use the same affine map.
struct ReluNet {
    std::vector<Eigen::MatrixXd> weights;  // W_k, one per hidden layer
    std::vector<Eigen::VectorXd> biases;   // b_k
    Eigen::VectorXd output;                // c
    Eigen::VectorXd input_scale;           // per-dimension divisor, defaults to 1

    int input_size() const { return weights.empty() ? 0 : static_cast<int>(weights[0].cols()); }
    int num_hidden_layers() const { return static_cast<int>(weights.size()); }

    double forward(const Eigen::VectorXd& state) const;
    double forward(const std::vector<double>& state) const;

    // All post-activation values, layer by layer (for bound checks).
    std::vector<Eigen::VectorXd> activations(const Eigen::VectorXd& state) const;
};

ReluNet make_relu_net(int input, const std::vector<int>& hidden, std::uint64_t seed,
                      const std::vector<double>& input_scale = {});

// Interval bounds per layer: index 0 is the (scaled) input box, then one
// post-activation box per hidden layer.
struct LayerBounds {
    std::vector<Eigen::VectorXd> lower, upper;
};

// Extremes of w.x + b over the box [lo, hi], by the component sign rule.
std::pair<double, double> neuron_big_m(const Eigen::VectorXd& w, double b,
                                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

// Propagates the (unscaled) input box through the network.
LayerBounds propagate_bounds(const ReluNet& net, const std::vector<double>& box_lo,
                             const std::vector<double>& box_hi);

struct FitSample {
    Eigen::VectorXd state;
    double target = 0.0;
};

struct FitOptions {
    double step_size = 1e-3;
    int batch_size = 64;
    int epochs = 200;
    std::uint64_t seed = 0;
};

// Mean squared error over the dataset, plus its gradient with respect to
// every parameter (same layout as the net). Used by fit and by tests.
struct NetGradient {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Eigen::VectorXd output;
};
double mse_and_gradient(const ReluNet& net, const std::vector<FitSample>& batch,
                        NetGradient* grad);

// Minimizes MSE with mini-batch Adam. Returns the per-epoch loss trace
// (full-dataset MSE after each epoch). Throws on an empty dataset or a
// non-finite loss.
std::vector<double> fit(ReluNet& net, const std::vector<FitSample>& data,
                        const FitOptions& opt);

// Versioned text serialization; round-trips bit-exactly (hex floats).
std::string serialize_net(const ReluNet& net);
ReluNet deserialize_net(const std::string& text);
void save_net(const ReluNet& net, const std::string& path);
ReluNet load_net(const std::string& path);

}  // namespace parl
