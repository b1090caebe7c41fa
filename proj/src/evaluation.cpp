#include "parl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "parl/training.hpp"

namespace parl {

EvalReport run_evaluation(const PolicyFactory& factory, const NetworkConfig& cfg,
                          const EvalOptions& opt) {
    EvalReport report;
    report.runs.resize(opt.runs);
    std::vector<std::vector<long long>> demand_logs(opt.runs);

    parallel_for(opt.runs, opt.parallelism, [&](int run) {
        RunStat stat;
        stat.run = run;
        auto policy = factory(derive_seed(opt.base_seed, run, 0x90));
        double reward = 0.0, revenue = 0.0, ordering = 0.0, holding = 0.0;
        long steps = 0;
        try {
            for (int ep = 0; ep < opt.episodes; ++ep) {
                Environment env(cfg, derive_seed(opt.base_seed, run, ep));
                Realization real;
                for (int t = 0; t < opt.steps; ++t) {
                    Action requested = policy->act(env.state());
                    auto rb = env.step_fulfilled(requested, nullptr, &real);
                    reward += rb.total;
                    for (const auto& nr : rb.per_node) {
                        revenue += nr.revenue;
                        ordering += nr.transship_cost;
                        holding += nr.holding_cost;
                    }
                    if (opt.demand_log)
                        for (size_t n = 0; n < cfg.nodes.size(); ++n)
                            if (cfg.nodes[n].has_demand)
                                demand_logs[run].push_back(real.demand[n]);
                    ++steps;
                }
            }
            stat.mean_step_reward = reward / steps;
            stat.revenue = revenue / steps;
            stat.ordering_cost = ordering / steps;
            stat.holding_cost = holding / steps;
        } catch (const std::exception& e) {
            stat.failed = true;
            std::cerr << "run " << run << " failed and is excluded: " << e.what() << "\n";
        }
        report.runs[run] = stat;
    });

    if (opt.demand_log)
        for (auto& log : demand_logs)
            opt.demand_log->insert(opt.demand_log->end(), log.begin(), log.end());

    std::vector<double> means;
    for (const auto& r : report.runs) {
        if (r.failed) {
            ++report.failed_runs;
            continue;
        }
        means.push_back(r.mean_step_reward);
        report.revenue += r.revenue;
        report.ordering_cost += r.ordering_cost;
        report.holding_cost += r.holding_cost;
    }
    if (!means.empty()) {
        report.mean = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
        auto sorted = means;
        std::sort(sorted.begin(), sorted.end());
        report.median = sorted.size() % 2
                            ? sorted[sorted.size() / 2]
                            : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
        double var = 0.0;
        for (double m : means) var += (m - report.mean) * (m - report.mean);
        report.stddev = means.size() > 1 ? std::sqrt(var / (means.size() - 1)) : 0.0;
        report.revenue /= means.size();
        report.ordering_cost /= means.size();
        report.holding_cost /= means.size();
    }
    return report;
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
    out << "row,run,mean_step_reward,revenue,ordering_cost,holding_cost,failed\n";
    out.precision(12);
    for (const auto& r : report.runs)
        out << "run," << r.run << ',' << r.mean_step_reward << ',' << r.revenue << ','
            << r.ordering_cost << ',' << r.holding_cost << ',' << (r.failed ? 1 : 0) << '\n';
    out << "aggregate,mean," << report.mean << ',' << report.revenue << ','
        << report.ordering_cost << ',' << report.holding_cost << ',' << report.failed_runs
        << '\n';
    out << "aggregate,median," << report.median << ",,,,\n";
    out << "aggregate,stddev," << report.stddev << ",,,,\n";
}

EvalReport read_eval_csv(std::istream& in) {
    EvalReport report;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells[0] == "run") {
            RunStat r;
            r.run = std::stoi(cells[1]);
            r.mean_step_reward = std::stod(cells[2]);
            r.revenue = std::stod(cells[3]);
            r.ordering_cost = std::stod(cells[4]);
            r.holding_cost = std::stod(cells[5]);
            r.failed = cells.size() > 6 && cells[6] == "1";
            report.runs.push_back(r);
        } else if (cells[0] == "aggregate") {
            if (cells[1] == "mean") {
                report.mean = std::stod(cells[2]);
                report.revenue = std::stod(cells[3]);
                report.ordering_cost = std::stod(cells[4]);
                report.holding_cost = std::stod(cells[5]);
                report.failed_runs = std::stoi(cells[6]);
            } else if (cells[1] == "median") {
                report.median = std::stod(cells[2]);
            } else if (cells[1] == "stddev") {
                report.stddev = std::stod(cells[2]);
            }
        }
    }
    return report;
}

}  // namespace parl
