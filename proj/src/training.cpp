#include "parl/training.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "parl/milp_build.hpp"

namespace parl {

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Trajectory rollout(const NetworkConfig& cfg, Policy& policy, int steps, double epsilon,
                   std::uint64_t seed) {
    Environment env(cfg, seed);
    Rng explore_rng(derive_seed(seed, 0xe9));
    Trajectory traj;
    traj.steps.reserve(steps);
    for (int t = 0; t < steps; ++t) {
        TrajectoryStep rec;
        rec.state = state_to_vector(cfg, env.state());
        rec.explored = epsilon > 0.0 && uniform01(explore_rng) < epsilon;
        Action requested = rec.explored ? uniform_random_action(cfg, explore_rng)
                                        : policy.act(env.state());
        Action fulfilled;
        RewardBreakdown rb = env.step_fulfilled(requested, &fulfilled);
        if (!rec.explored && fulfilled.qty != requested.qty) ++traj.infeasible_warnings;
        rec.action = std::move(fulfilled);
        rec.reward = rb.total;
        traj.steps.push_back(std::move(rec));
    }
    traj.final_state = state_to_vector(cfg, env.state());
    return traj;
}

std::vector<double> compute_returns(const std::vector<double>& rewards, double gamma) {
    if (rewards.empty()) throw std::invalid_argument("compute_returns: empty trajectory");
    std::vector<double> returns(rewards.size());
    double acc = 0.0;
    for (size_t t = rewards.size(); t-- > 0;) {
        acc = rewards[t] + gamma * acc;
        returns[t] = acc;
    }
    return returns;
}

namespace {

struct RolloutSummary {
    double mean = 0.0;
};

void write_curve_csv(const std::string& path, const std::vector<IterationStats>& curve) {
    std::ofstream out(path);
    out << "iteration,env_steps,mean_step_reward,median_step_reward,std_step_reward,"
           "fit_loss,seconds\n";
    for (const auto& row : curve)
        out << row.iteration << ',' << row.env_steps << ',' << row.mean_step_reward << ','
            << row.median_step_reward << ',' << row.std_step_reward << ',' << row.fit_loss
            << ',' << row.seconds << '\n';
}

}  // namespace

ParlResult parl_train(const NetworkConfig& cfg, const ParlHyper& hyper, std::uint64_t seed,
                      const std::string& out_dir, std::ostream* log) {
    using Clock = std::chrono::steady_clock;
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    GreedyPolicyConfig pc;
    pc.gamma = hyper.gamma;
    pc.eta = hyper.eta;
    pc.scheme = hyper.scheme;
    pc.quantile_weights = hyper.quantile_weights;
    pc.solver = hyper.solver;
    pc.enumeration_cap = hyper.enumeration_cap;
    pc.time_limit_seconds = hyper.solve_time_limit;

    ParlResult result;
    result.policy_config = pc;
    std::shared_ptr<const ReluNet> critic;  // none in iteration 1: random actor
    long env_steps = 0;

    const int N = hyper.rollouts_per_iteration;
    const int T = hyper.steps_per_rollout;
    for (int iter = 1; iter <= hyper.iterations; ++iter) {
        auto t0 = Clock::now();
        std::vector<Trajectory> trajs(N);
        parallel_for(N, hyper.parallelism, [&](int n) {
            std::uint64_t env_seed = derive_seed(seed, iter, n, 0);
            std::uint64_t pol_seed = derive_seed(seed, iter, n, 1);
            if (critic) {
                GreedyMipPolicy policy(cfg, critic, pc, pol_seed);
                trajs[n] = rollout(cfg, policy, T, hyper.epsilon, env_seed);
            } else {
                RandomPolicy policy(cfg, pol_seed);
                trajs[n] = rollout(cfg, policy, T, hyper.epsilon, env_seed);
            }
        });

        // All visited tuples, exploration steps included.
        std::vector<FitSample> dataset;
        dataset.reserve(static_cast<size_t>(N) * T);
        std::vector<double> per_rollout_mean;
        double reward_sum = 0.0;
        for (const auto& traj : trajs) {
            std::vector<double> rewards;
            rewards.reserve(traj.steps.size());
            for (const auto& s : traj.steps) rewards.push_back(s.reward);
            auto returns = compute_returns(rewards, hyper.gamma);
            for (size_t t = 0; t < traj.steps.size(); ++t) {
                FitSample fs;
                fs.state = Eigen::Map<const Eigen::VectorXd>(traj.steps[t].state.data(),
                                                             traj.steps[t].state.size());
                fs.target = returns[t];
                dataset.push_back(std::move(fs));
            }
            double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / rewards.size();
            per_rollout_mean.push_back(mean);
            reward_sum += std::accumulate(rewards.begin(), rewards.end(), 0.0);
        }
        env_steps += static_cast<long>(N) * T;

        // Fresh critic each iteration (cold start).
        ReluNet net = make_relu_net(cfg.state_size(), hyper.hidden_layers,
                                    derive_seed(seed, iter, 0x0f17), critic_input_scale(cfg));
        FitOptions fo = hyper.fit;
        fo.seed = derive_seed(seed, iter, 0xad0);
        auto trace = fit(net, dataset, fo);
        critic = std::make_shared<const ReluNet>(std::move(net));

        IterationStats st;
        st.iteration = iter;
        st.env_steps = env_steps;
        st.mean_step_reward = reward_sum / (static_cast<double>(N) * T);
        {
            auto sorted = per_rollout_mean;
            std::sort(sorted.begin(), sorted.end());
            st.median_step_reward = sorted.size() % 2
                                        ? sorted[sorted.size() / 2]
                                        : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                                 sorted[sorted.size() / 2]);
            double mean_of_means =
                std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
            double var = 0.0;
            for (double v : sorted) var += (v - mean_of_means) * (v - mean_of_means);
            st.std_step_reward = sorted.size() > 1 ? std::sqrt(var / (sorted.size() - 1)) : 0.0;
        }
        st.fit_loss = trace.empty() ? 0.0 : trace.back();
        st.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        result.curve.push_back(st);

        if (!out_dir.empty()) {
            save_net(*critic, out_dir + "/critic_iter" + std::to_string(iter) + ".net");
            write_curve_csv(out_dir + "/learning_curve.csv", result.curve);
        }
        if (log)
            (*log) << "iter " << iter << "  mean/step " << st.mean_step_reward << "  fit-mse "
                   << st.fit_loss << "  " << st.seconds << "s\n";
    }

    result.net = *critic;
    return result;
}

std::unique_ptr<Policy> make_parl_policy(const NetworkConfig& cfg, const ParlResult& trained,
                                         std::uint64_t seed) {
    return std::make_unique<GreedyMipPolicy>(
        cfg, std::make_shared<const ReluNet>(trained.net), trained.policy_config, seed);
}

}  // namespace parl
