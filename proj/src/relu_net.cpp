#include "parl/relu_net.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace parl {

namespace {

Eigen::VectorXd scaled_input(const ReluNet& net, const Eigen::VectorXd& state) {
    if (net.input_scale.size() == 0) return state;
    if (state.size() != net.input_scale.size())
        throw std::invalid_argument("ReluNet: input dimension mismatch");
    return state.cwiseQuotient(net.input_scale);
}

}  // namespace

double ReluNet::forward(const Eigen::VectorXd& state) const {
    if (state.size() != input_size())
        throw std::invalid_argument("ReluNet::forward: input dimension mismatch");
    Eigen::VectorXd z = scaled_input(*this, state);
    for (size_t k = 0; k < weights.size(); ++k)
        z = ((weights[k] * z + biases[k]).array().max(0.0)).matrix();
    return output.dot(z);
}

double ReluNet::forward(const std::vector<double>& state) const {
    return forward(Eigen::Map<const Eigen::VectorXd>(state.data(), state.size()));
}

std::vector<Eigen::VectorXd> ReluNet::activations(const Eigen::VectorXd& state) const {
    std::vector<Eigen::VectorXd> acts;
    Eigen::VectorXd z = scaled_input(*this, state);
    acts.push_back(z);
    for (size_t k = 0; k < weights.size(); ++k) {
        z = ((weights[k] * z + biases[k]).array().max(0.0)).matrix();
        acts.push_back(z);
    }
    return acts;
}

ReluNet make_relu_net(int input, const std::vector<int>& hidden, std::uint64_t seed,
                      const std::vector<double>& input_scale) {
    if (input <= 0 || hidden.empty())
        throw std::invalid_argument("make_relu_net: need a positive input size and hidden layers");
    ReluNet net;
    Rng rng(derive_seed(seed, 0x4e7));
    int prev = input;
    for (int width : hidden) {
        double r = 1.0 / std::sqrt(static_cast<double>(prev));
        Eigen::MatrixXd w(width, prev);
        Eigen::VectorXd b(width);
        for (int i = 0; i < width; ++i) {
            for (int j = 0; j < prev; ++j) w(i, j) = (2.0 * uniform01(rng) - 1.0) * r;
            b(i) = (2.0 * uniform01(rng) - 1.0) * r;
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
        prev = width;
    }
    double r = 1.0 / std::sqrt(static_cast<double>(prev));
    net.output.resize(prev);
    for (int i = 0; i < prev; ++i) net.output(i) = (2.0 * uniform01(rng) - 1.0) * r;
    if (!input_scale.empty()) {
        if (static_cast<int>(input_scale.size()) != input)
            throw std::invalid_argument("make_relu_net: input_scale dimension mismatch");
        net.input_scale =
            Eigen::Map<const Eigen::VectorXd>(input_scale.data(), input_scale.size());
        for (int i = 0; i < net.input_scale.size(); ++i)
            if (!(net.input_scale(i) > 0))
                throw std::invalid_argument("make_relu_net: input_scale must be positive");
    }
    return net;
}

std::pair<double, double> neuron_big_m(const Eigen::VectorXd& w, double b,
                                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    if (w.size() != lo.size() || w.size() != hi.size())
        throw std::invalid_argument("neuron_big_m: dimension mismatch");
    double up = b, down = b;
    for (int i = 0; i < w.size(); ++i) {
        if (!(std::isfinite(lo(i)) && std::isfinite(hi(i))))
            throw std::invalid_argument("neuron_big_m: bounded input box required");
        if (lo(i) > hi(i)) throw std::invalid_argument("neuron_big_m: empty box");
        if (w(i) >= 0) {
            up += w(i) * hi(i);
            down += w(i) * lo(i);
        } else {
            up += w(i) * lo(i);
            down += w(i) * hi(i);
        }
    }
    return {up, down};  // (M+, M-)
}

LayerBounds propagate_bounds(const ReluNet& net, const std::vector<double>& box_lo,
                             const std::vector<double>& box_hi) {
    if (static_cast<int>(box_lo.size()) != net.input_size() || box_lo.size() != box_hi.size())
        throw std::invalid_argument("propagate_bounds: box dimension mismatch");
    LayerBounds bounds;
    Eigen::VectorXd lo = Eigen::Map<const Eigen::VectorXd>(box_lo.data(), box_lo.size());
    Eigen::VectorXd hi = Eigen::Map<const Eigen::VectorXd>(box_hi.data(), box_hi.size());
    if (net.input_scale.size() > 0) {
        lo = lo.cwiseQuotient(net.input_scale);
        hi = hi.cwiseQuotient(net.input_scale);
    }
    bounds.lower.push_back(lo);
    bounds.upper.push_back(hi);
    for (size_t k = 0; k < net.weights.size(); ++k) {
        const auto& prev_lo = bounds.lower.back();
        const auto& prev_hi = bounds.upper.back();
        int width = static_cast<int>(net.weights[k].rows());
        Eigen::VectorXd l(width), u(width);
        for (int q = 0; q < width; ++q) {
            auto [mp, mm] = neuron_big_m(net.weights[k].row(q).transpose(), net.biases[k](q),
                                         prev_lo, prev_hi);
            l(q) = std::max(0.0, mm);
            u(q) = std::max(0.0, mp);
        }
        bounds.lower.push_back(std::move(l));
        bounds.upper.push_back(std::move(u));
    }
    return bounds;
}

double mse_and_gradient(const ReluNet& net, const std::vector<FitSample>& batch,
                        NetGradient* grad) {
    if (batch.empty()) throw std::invalid_argument("mse_and_gradient: empty batch");
    const size_t L = net.weights.size();
    if (grad) {
        grad->weights.clear();
        grad->biases.clear();
        for (size_t k = 0; k < L; ++k) {
            grad->weights.push_back(Eigen::MatrixXd::Zero(net.weights[k].rows(),
                                                          net.weights[k].cols()));
            grad->biases.push_back(Eigen::VectorXd::Zero(net.biases[k].size()));
        }
        grad->output = Eigen::VectorXd::Zero(net.output.size());
    }
    double loss = 0.0;
    std::vector<Eigen::VectorXd> pre(L), post(L + 1);
    for (const auto& sample : batch) {
        post[0] = scaled_input(net, sample.state);
        for (size_t k = 0; k < L; ++k) {
            pre[k] = net.weights[k] * post[k] + net.biases[k];
            post[k + 1] = pre[k].array().max(0.0).matrix();
        }
        double value = net.output.dot(post[L]);
        double err = value - sample.target;
        loss += err * err;
        if (!grad) continue;
        // Backward pass: d(err^2)/d(value) = 2 err.
        grad->output += 2.0 * err * post[L];
        Eigen::VectorXd delta = 2.0 * err * net.output;
        for (size_t k = L; k-- > 0;) {
            for (int i = 0; i < delta.size(); ++i)
                if (pre[k](i) <= 0.0) delta(i) = 0.0;
            grad->weights[k] += delta * post[k].transpose();
            grad->biases[k] += delta;
            if (k > 0) delta = net.weights[k].transpose() * delta;
        }
    }
    double inv = 1.0 / static_cast<double>(batch.size());
    loss *= inv;
    if (grad) {
        for (size_t k = 0; k < L; ++k) {
            grad->weights[k] *= inv;
            grad->biases[k] *= inv;
        }
        grad->output *= inv;
    }
    return loss;
}

namespace {

struct AdamState {
    std::vector<Eigen::MatrixXd> mw, vw;
    std::vector<Eigen::VectorXd> mb, vb;
    Eigen::VectorXd mc, vc;
    long t = 0;

    explicit AdamState(const ReluNet& net) {
        for (size_t k = 0; k < net.weights.size(); ++k) {
            mw.push_back(Eigen::MatrixXd::Zero(net.weights[k].rows(), net.weights[k].cols()));
            vw.push_back(Eigen::MatrixXd::Zero(net.weights[k].rows(), net.weights[k].cols()));
            mb.push_back(Eigen::VectorXd::Zero(net.biases[k].size()));
            vb.push_back(Eigen::VectorXd::Zero(net.biases[k].size()));
        }
        mc = Eigen::VectorXd::Zero(net.output.size());
        vc = Eigen::VectorXd::Zero(net.output.size());
    }
};

constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

template <typename T>
void adam_update(T& param, T& m, T& v, const T& g, double lr, double bc1, double bc2) {
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    param -= (lr * (m / bc1).array() / ((v / bc2).array().sqrt() + kAdamEps)).matrix();
}

}  // namespace

std::vector<double> fit(ReluNet& net, const std::vector<FitSample>& data, const FitOptions& opt) {
    if (data.empty()) throw std::invalid_argument("fit: empty dataset");
    for (const auto& s : data)
        if (!std::isfinite(s.target) || s.state.size() != net.input_size())
            throw std::invalid_argument("fit: invalid sample");

    AdamState adam(net);
    Rng rng(derive_seed(opt.seed, 0xf17));
    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), size_t{0});

    std::vector<double> trace;
    trace.reserve(opt.epochs);
    const int bs = std::max(1, opt.batch_size);
    NetGradient g;
    std::vector<FitSample> batch;
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        // Fisher-Yates with our own rng for cross-platform determinism.
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[uniform_int(rng, 0, static_cast<long long>(i) - 1)]);
        for (size_t start = 0; start < order.size(); start += bs) {
            batch.clear();
            for (size_t i = start; i < std::min(order.size(), start + bs); ++i)
                batch.push_back(data[order[i]]);
            double loss = mse_and_gradient(net, batch, &g);
            if (!std::isfinite(loss))
                throw std::runtime_error("fit: loss diverged to a non-finite value at epoch " +
                                         std::to_string(epoch));
            if (opt.step_size == 0.0) continue;
            ++adam.t;
            double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.t));
            double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.t));
            for (size_t k = 0; k < net.weights.size(); ++k) {
                adam_update(net.weights[k], adam.mw[k], adam.vw[k], g.weights[k], opt.step_size,
                            bc1, bc2);
                adam_update(net.biases[k], adam.mb[k], adam.vb[k], g.biases[k], opt.step_size,
                            bc1, bc2);
            }
            adam_update(net.output, adam.mc, adam.vc, g.output, opt.step_size, bc1, bc2);
        }
        trace.push_back(mse_and_gradient(net, data, nullptr));
    }
    return trace;
}

namespace {

void put_vector(std::ostringstream& out, const Eigen::VectorXd& v) {
    char buf[64];
    for (int i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%a", v(i));
        out << buf << (i + 1 == v.size() ? "" : " ");
    }
    out << '\n';
}

}  // namespace

std::string serialize_net(const ReluNet& net) {
    std::ostringstream out;
    out << "relunet 1\n";
    out << net.input_size();
    for (const auto& w : net.weights) out << ' ' << w.rows();
    out << '\n';
    Eigen::VectorXd scale = net.input_scale.size() > 0
                                ? net.input_scale
                                : Eigen::VectorXd::Ones(net.input_size());
    put_vector(out, scale);
    for (size_t k = 0; k < net.weights.size(); ++k) {
        for (int r = 0; r < net.weights[k].rows(); ++r)
            put_vector(out, net.weights[k].row(r).transpose());
        put_vector(out, net.biases[k]);
    }
    put_vector(out, net.output);
    return out.str();
}

ReluNet deserialize_net(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "relunet" || version != 1)
        throw std::runtime_error("deserialize_net: unrecognized header");
    std::string line;
    std::getline(in, line);
    if (!std::getline(in, line)) throw std::runtime_error("deserialize_net: missing dims");
    std::istringstream dims(line);
    std::vector<int> sizes;
    int d;
    while (dims >> d) sizes.push_back(d);
    if (sizes.size() < 2) throw std::runtime_error("deserialize_net: need input and hidden dims");

    auto read_vector = [&](int n) {
        Eigen::VectorXd v(n);
        std::string token;
        for (int i = 0; i < n; ++i) {
            if (!(in >> token)) throw std::runtime_error("deserialize_net: truncated data");
            char* end = nullptr;
            v(i) = std::strtod(token.c_str(), &end);  // strtod handles hex floats
            if (end == token.c_str())
                throw std::runtime_error("deserialize_net: bad number '" + token + "'");
        }
        return v;
    };

    ReluNet net;
    net.input_scale = read_vector(sizes[0]);
    for (size_t k = 1; k < sizes.size(); ++k) {
        Eigen::MatrixXd w(sizes[k], sizes[k - 1]);
        for (int r = 0; r < sizes[k]; ++r) w.row(r) = read_vector(sizes[k - 1]).transpose();
        net.weights.push_back(std::move(w));
        net.biases.push_back(read_vector(sizes[k]));
    }
    net.output = read_vector(sizes.back());
    return net;
}

void save_net(const ReluNet& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_net: cannot open " + path);
    out << serialize_net(net);
}

ReluNet load_net(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_net: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_net(buf.str());
}

}  // namespace parl
