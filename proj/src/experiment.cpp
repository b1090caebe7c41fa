#include "parl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "parl/heuristics.hpp"
#include "parl/presets.hpp"

namespace parl {

std::vector<SamplingComparisonRow> compare_sampling(const NetworkConfig& cfg,
                                                    const ParlHyper& hyper, std::uint64_t seed,
                                                    const EvalOptions& eval) {
    std::vector<SamplingComparisonRow> rows;
    for (SamplingScheme scheme : {SamplingScheme::Quantile, SamplingScheme::Random}) {
        ParlHyper h = hyper;
        h.scheme = scheme;
        auto t0 = std::chrono::steady_clock::now();
        ParlResult trained = parl_train(cfg, h, seed);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count();
        long env_steps = static_cast<long>(h.iterations) * h.rollouts_per_iteration *
                         h.steps_per_rollout;
        EvalReport report = run_evaluation(
            [&](std::uint64_t s) { return make_parl_policy(cfg, trained, s); }, cfg, eval);
        rows.push_back({scheme == SamplingScheme::Quantile ? "quantile" : "random",
                        report.mean, seconds / env_steps});
    }
    return rows;
}

namespace {

struct IniFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
    std::string get(const std::string& sec, const std::string& key,
                    const std::string& fallback = "") const {
        auto s = sections.find(sec);
        if (s == sections.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }
    double num(const std::string& sec, const std::string& key, double fallback) const {
        std::string v = get(sec, key);
        return v.empty() ? fallback : std::stod(v);
    }
};

std::string trim_copy(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

IniFile parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment spec: " + path);
    IniFile ini;
    std::string line, section;
    while (std::getline(in, line)) {
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim_copy(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim_copy(line.substr(1, line.size() - 2));
            ini.sections[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("experiment spec: expected key = value, got " + line);
        ini.sections[section][trim_copy(line.substr(0, eq))] = trim_copy(line.substr(eq + 1));
    }
    return ini;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::string v = trim_copy(text);
    if (!v.empty() && v.front() == '[') v = v.substr(1, v.size() - 2);
    std::vector<int> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stoi(trim_copy(item)));
    return out;
}

ParlHyper hyper_from_ini(const IniFile& ini) {
    ParlHyper h;
    h.gamma = ini.num("parl", "gamma", h.gamma);
    h.eta = static_cast<int>(ini.num("parl", "eta", h.eta));
    h.epsilon = ini.num("parl", "epsilon", h.epsilon);
    h.steps_per_rollout = static_cast<int>(ini.num("parl", "steps", h.steps_per_rollout));
    h.rollouts_per_iteration =
        static_cast<int>(ini.num("parl", "rollouts", h.rollouts_per_iteration));
    h.iterations = static_cast<int>(ini.num("parl", "iterations", h.iterations));
    std::string scheme = ini.get("parl", "scheme", "quantile");
    h.scheme = scheme == "random" ? SamplingScheme::Random : SamplingScheme::Quantile;
    std::string weights = ini.get("parl", "quantile_weights", "density");
    h.quantile_weights = weights == "uniform" ? QuantileWeights::Uniform
                                              : QuantileWeights::DensityAtLevel;
    if (ini.has("parl", "hidden")) {
        h.hidden_layers.clear();
        std::istringstream in(ini.get("parl", "hidden"));
        std::string part;
        while (std::getline(in, part, 'x')) h.hidden_layers.push_back(std::stoi(part));
    }
    h.fit.epochs = static_cast<int>(ini.num("parl", "epochs", h.fit.epochs));
    h.fit.step_size = ini.num("parl", "step_size", h.fit.step_size);
    std::string solver = ini.get("parl", "solver", "auto");
    h.solver = solver == "enum" ? SolverChoice::Enumeration
               : solver == "bnb" ? SolverChoice::BranchAndBound
                                 : SolverChoice::Auto;
    h.solve_time_limit = ini.num("parl", "time_limit", h.solve_time_limit);
    h.parallelism = static_cast<int>(ini.num("parl", "parallelism", h.parallelism));
    return h;
}

}  // namespace

int run_experiment(const std::string& spec_path, const std::string& out_override,
                   std::ostream& log) {
    IniFile ini = parse_ini(spec_path);
    const std::string method = ini.get("experiment", "method");
    if (method.empty()) throw std::runtime_error("experiment spec: missing method");
    if (method != "parl" && method != "bs" && method != "da" && method != "fixed" &&
        method != "zero")
        throw std::runtime_error("experiment spec: unknown method '" + method + "'");

    const std::uint64_t seed =
        static_cast<std::uint64_t>(ini.num("experiment", "seed", 1));
    const bool desk = ini.get("experiment", "preset_scale", "desk") != "paper";

    NetworkConfig cfg;
    std::string config_snapshot;
    if (ini.has("experiment", "preset")) {
        std::string name = ini.get("experiment", "preset");
        cfg = make_preset(name, desk);
        config_snapshot = preset_config_text(name);
    } else if (ini.has("experiment", "config")) {
        std::string path = ini.get("experiment", "config");
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        config_snapshot = buf.str();
        cfg = parse_config(config_snapshot);
    } else {
        throw std::runtime_error("experiment spec: need preset or config");
    }

    std::string out_dir = !out_override.empty() ? out_override
                                                : ini.get("experiment", "out", "run-out");
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream snap(out_dir + "/config.cfg");
        snap << config_snapshot;
    }

    EvalOptions eval;
    eval.runs = static_cast<int>(ini.num("eval", "runs", desk ? 5 : 10));
    eval.episodes = static_cast<int>(ini.num("eval", "episodes", desk ? 4 : 20));
    eval.steps = static_cast<int>(ini.num("eval", "steps", desk ? 64 : 256));
    eval.base_seed = derive_seed(seed, 0xe0a1);
    std::vector<long long> demands;
    eval.demand_log = &demands;

    PolicyFactory factory;
    if (method == "parl") {
        ParlHyper hyper = hyper_from_ini(ini);
        log << "training parl on " << cfg.name << " (" << hyper.iterations
            << " iterations)...\n";
        ParlResult trained = parl_train(cfg, hyper, seed, out_dir, &log);
        save_net(trained.net, out_dir + "/critic_final.net");
        factory = [&cfg, trained](std::uint64_t s) { return make_parl_policy(cfg, trained, s); };
        eval.parallelism = hyper.parallelism;
        EvalReport report = run_evaluation(factory, cfg, eval);
        report.policy = "parl";
        std::ofstream out(out_dir + "/eval.csv");
        write_eval_csv(out, report);
        log << "parl mean/step " << report.mean << "\n";
    } else if (method == "bs") {
        GridSearchOptions gs;
        gs.runs = static_cast<int>(ini.num("bs", "runs", 3));
        gs.episodes = static_cast<int>(ini.num("bs", "episodes", 4));
        gs.steps = static_cast<int>(ini.num("bs", "steps", desk ? 64 : 256));
        gs.seed = derive_seed(seed, 0xb5);
        BaseStockParams params = grid_search_all_links(cfg, gs);
        std::ofstream pf(out_dir + "/base_stock.jsonl");
        pf << dump_base_stock(cfg, params);
        factory = [&cfg, params](std::uint64_t) {
            return std::make_unique<BaseStockPolicy>(cfg, params);
        };
        EvalReport report = run_evaluation(factory, cfg, eval);
        report.policy = "bs";
        std::ofstream out(out_dir + "/eval.csv");
        write_eval_csv(out, report);
        log << "bs mean/step " << report.mean << "\n";
    } else if (method == "da") {
        DALevels levels = da_levels(cfg);
        std::ofstream lf(out_dir + "/da_levels.jsonl");
        lf << dump_da_levels(cfg, levels);
        factory = [&cfg, levels](std::uint64_t) {
            return std::make_unique<DaPolicy>(cfg, levels);
        };
        EvalReport report = run_evaluation(factory, cfg, eval);
        report.policy = "da";
        std::ofstream out(out_dir + "/eval.csv");
        write_eval_csv(out, report);
        log << "da mean/step " << report.mean << "\n";
    } else if (method == "fixed") {
        BaseStockParams params;
        auto s_list = parse_int_list(ini.get("fixed", "s", "[0]"));
        auto S_list = parse_int_list(ini.get("fixed", "S", "[0]"));
        for (size_t e = 0; e < cfg.links.size(); ++e) {
            params.reorder_point.push_back(s_list[e % s_list.size()]);
            params.order_up_to.push_back(S_list[e % S_list.size()]);
        }
        std::ofstream pf(out_dir + "/base_stock.jsonl");
        pf << dump_base_stock(cfg, params);
        factory = [&cfg, params](std::uint64_t) {
            return std::make_unique<BaseStockPolicy>(cfg, params);
        };
        EvalReport report = run_evaluation(factory, cfg, eval);
        report.policy = "fixed";
        std::ofstream out(out_dir + "/eval.csv");
        write_eval_csv(out, report);
        log << "fixed mean/step " << report.mean << "\n";
    } else {  // zero
        factory = [&cfg](std::uint64_t) { return std::make_unique<ZeroPolicy>(cfg); };
        EvalReport report = run_evaluation(factory, cfg, eval);
        report.policy = "zero";
        std::ofstream out(out_dir + "/eval.csv");
        write_eval_csv(out, report);
        log << "zero mean/step " << report.mean << "\n";
    }

    {
        std::ofstream df(out_dir + "/demands.csv");
        df << "demand\n";
        for (long long d : demands) df << d << '\n';
    }
    return 0;
}

}  // namespace parl
