#include "sagin/experiment.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sagin/baselines.hpp"
#include "sagin/metrics.hpp"
#include "sagin/oracle.hpp"

namespace sagin {

namespace fs = std::filesystem;

std::uint64_t replica_seed(std::uint64_t master, int replica) {
    return splitmix64(master + static_cast<std::uint64_t>(replica));
}

namespace {

ScenarioConfig resolve_with_override(const ExperimentSpec& spec) {
    ScenarioConfig cfg = resolve_scenario(spec.scenario);
    if (spec.budget_override > 0.0) cfg.energy.budget = spec.budget_override;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write output file: " + path.string());
    return os;
}

using PolicyFn = std::function<int(const EnvState&, const ActionMask&)>;

struct FlightRun {
    std::vector<FlightStats> flights;
    std::vector<long> action_counts;  // idle, satellite, BS 1..N
};

/// Rolls a policy over whole trajectory loops. Energy/epoch accounting is
/// reset at each flight boundary so per-flight energy is self-contained.
FlightRun run_flights(const Env& env, const ActionSpace& space, const PolicyFn& policy,
                      int flights, Rng& rng) {
    FlightRun run;
    run.action_counts.assign(static_cast<std::size_t>(env.config().num_bs()) + 2, 0);
    const int wp_count = env.config().num_waypoints();
    EnvState s = env.initial_state();
    for (int f = 0; f < flights; ++f) {
        s.energy = 0.0;
        s.epoch = 0;
        FlightStats stats;
        stats.flight = f + 1;
        for (int w = 0; w < wp_count; ++w) {
            const ActionMask mask = compute_mask(env, space, s);
            const int a = policy(s, mask);
            const Action act = space.action(a);
            ++run.action_counts[static_cast<std::size_t>(act.alpha + 1)];
            const StepOutcome out = env.step(s, act, rng);
            stats.mean_delay += out.epoch_delay;
            stats.mean_energy += out.energy_spent;
            stats.dropped += out.dropped;
            s = out.next;
        }
        stats.mean_delay /= wp_count;
        stats.mean_energy /= wp_count;
        run.flights.push_back(stats);
    }
    return run;
}

void write_flight_outputs(const fs::path& dir, const FlightRun& run, double budget) {
    auto flights_os = open_out(dir / "flights.csv");
    write_flights_csv(flights_os, run.flights);

    std::vector<double> delays, energies;
    for (const auto& f : run.flights) {
        delays.push_back(f.mean_delay);
        energies.push_back(f.mean_energy);
    }
    const auto [dv, df] = compute_cdf(delays);
    auto dcdf = open_out(dir / "delay_cdf.csv");
    write_cdf_csv(dcdf, dv, df);
    const auto [ev, ef] = compute_cdf(energies);
    auto ecdf = open_out(dir / "energy_cdf.csv");
    write_cdf_csv(ecdf, ev, ef);

    auto summary = open_out(dir / "summary.json");
    summary << summarize_flights(run.flights, budget, run.action_counts) << '\n';
}

int run_train(const ExperimentSpec& spec) {
    const ScenarioConfig cfg = resolve_with_override(spec);
    fs::create_directories(spec.out_dir);

    struct ReplicaResult {
        std::vector<EpisodeReport> reports;
        std::exception_ptr error;
    };
    std::vector<ReplicaResult> results(static_cast<std::size_t>(spec.replicas));

    auto run_one = [&](int r) {
        ReplicaResult& res = results[static_cast<std::size_t>(r)];
        try {
            const fs::path dir = fs::path(spec.out_dir) / ("replica_" + std::to_string(r));
            fs::create_directories(dir);
            DotsAgent agent(cfg, spec.agent, replica_seed(spec.seed, r));
            auto metrics_os = open_out(dir / "metrics.csv");
            MetricsWriter writer(metrics_os, cfg.num_bs(), cfg.beta_max);
            agent.set_observer([&writer](const IterationRecord& rec) { writer.observe(rec); });
            res.reports = agent.run();

            auto episodes_os = open_out(dir / "episodes.csv");
            write_episodes_csv(episodes_os, res.reports, cfg.num_bs());
            auto summary_os = open_out(dir / "summary.json");
            summary_os << summarize_training(res.reports, cfg.energy.budget) << '\n';
            auto ckpt_os = open_out(dir / "checkpoint.txt");
            agent.save(ckpt_os);
        } catch (...) {
            res.error = std::current_exception();
        }
    };

    if (spec.replicas == 1) {
        run_one(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(spec.replicas));
        for (int r = 0; r < spec.replicas; ++r) threads.emplace_back(run_one, r);
        for (auto& t : threads) t.join();
    }

    for (auto& res : results)
        if (res.error) std::rethrow_exception(res.error);

    // Merged summary across replicas.
    nlohmann::json merged;
    merged["replicas"] = spec.replicas;
    merged["budget"] = cfg.energy.budget;
    double tail_delay = 0.0, tail_energy = 0.0;
    for (int r = 0; r < spec.replicas; ++r) {
        const auto& reports = results[static_cast<std::size_t>(r)].reports;
        const std::size_t from = reports.size() > 10 ? reports.size() - 10 : 0;
        double d = 0.0, e = 0.0;
        for (std::size_t i = from; i < reports.size(); ++i) {
            d += reports[i].avg_delay;
            e += reports[i].avg_energy;
        }
        d /= static_cast<double>(reports.size() - from);
        e /= static_cast<double>(reports.size() - from);
        merged["replica_tail_mean_delay"].push_back(d);
        merged["replica_tail_mean_energy"].push_back(e);
        tail_delay += d;
        tail_energy += e;
    }
    merged["tail_mean_delay"] = tail_delay / spec.replicas;
    merged["tail_mean_energy"] = tail_energy / spec.replicas;
    auto merged_os = open_out(fs::path(spec.out_dir) / "summary.json");
    merged_os << merged.dump(2) << '\n';
    return kOk;
}

int run_evaluate(const ExperimentSpec& spec) {
    const ScenarioConfig cfg = resolve_with_override(spec);
    if (spec.checkpoint.empty())
        throw ConfigError("evaluate mode needs --checkpoint from a training run");
    fs::create_directories(spec.out_dir);

    DotsAgent agent(cfg, spec.agent, spec.seed);
    std::ifstream ckpt(spec.checkpoint);
    if (!ckpt) throw ConfigError("cannot open checkpoint: " + spec.checkpoint);
    agent.load(ckpt);

    Rng rng(splitmix64(spec.seed ^ 0x5eedULL));
    const PolicyFn policy = [&](const EnvState& s, const ActionMask& mask) {
        return agent.greedy_action(agent.encoder().encode(s), mask);
    };
    const FlightRun run =
        run_flights(agent.env(), agent.action_space(), policy, spec.flights, rng);
    write_flight_outputs(spec.out_dir, run, cfg.energy.budget);
    return kOk;
}

int run_baseline(const ExperimentSpec& spec) {
    const ScenarioConfig cfg = resolve_with_override(spec);
    fs::create_directories(spec.out_dir);
    const Env env(cfg);
    const ActionSpace space(cfg.num_bs(), cfg.beta_max);
    Rng rng(splitmix64(spec.seed));

    PolicyFn policy;
    if (spec.baseline_kind == "rpc") {
        policy = [&](const EnvState&, const ActionMask& mask) {
            return rpc_policy(mask, rng);
        };
    } else if (spec.baseline_kind == "spc") {
        Rng calib_rng(splitmix64(spec.seed ^ 0xca11bULL));
        const SpcTable table =
            spc_calibrate(env, space, cfg.energy.budget, spec.spc_samples, calib_rng);
        auto table_os = open_out(fs::path(spec.out_dir) / "spc_table.txt");
        save_spc(table_os, table);
        std::cout << "spc calibrated: p = " << table.intensity
                  << ", achieved mean energy = " << table.achieved_energy << " J/epoch\n";
        policy = [&env, &space, &rng, table](const EnvState& s, const ActionMask& mask) {
            return spc_policy(table, env, space, s, mask, rng);
        };
    } else {
        throw ConfigError("unknown baseline kind: " + spec.baseline_kind);
    }

    const FlightRun run = run_flights(env, space, policy, spec.flights, rng);
    write_flight_outputs(spec.out_dir, run, cfg.energy.budget);
    return kOk;
}

int run_oracle_check(const ExperimentSpec& spec) {
    ScenarioConfig cfg = resolve_with_override(spec);
    bool all_ok = true;
    auto report = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << '\n';
        all_ok = all_ok && ok;
    };

    const TabularMdp mdp = build_tabular(cfg);
    std::cout << "tabular states: " << mdp.num_states() << '\n';

    double worst_row = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s)
        for (std::size_t slot = 0; slot < mdp.allowed(s).size(); ++slot) {
            double sum = 0.0;
            for (const auto& o : mdp.outcomes(s, static_cast<int>(slot))) sum += o.prob;
            worst_row = std::max(worst_row, std::abs(sum - 1.0));
        }
    report(worst_row < 1e-12, "kernel rows sum to 1 (worst |err| = " +
                                  std::to_string(worst_row) + ")");

    for (const double delta : {0.0, 1.0}) {
        const OracleSolution vi = value_iteration(mdp, delta, 0.9);

        TabularLearnerConfig lcfg;
        lcfg.delta = delta;
        lcfg.mode = TabularMode::kComposite;
        TabularLearner learner(mdp, lcfg, splitmix64(spec.seed));
        learner.run();

        double sup = 0.0;
        for (int s = 0; s < mdp.num_states(); ++s)
            for (std::size_t slot = 0; slot < vi.q[static_cast<std::size_t>(s)].size(); ++slot)
                sup = std::max(sup, std::abs(vi.q[static_cast<std::size_t>(s)][slot] -
                                             learner.q()[static_cast<std::size_t>(s)][slot]));
        std::ostringstream what;
        what << "tabular Q-learning matches value iteration at delta = " << delta
             << " (sup error = " << sup << ")";
        report(sup < 1e-3, what.str());
        report(learner.greedy_policy() == vi.greedy,
               "greedy policies match exactly at delta = " + std::to_string(delta));
    }

    {
        // Policy agreement needs far fewer samples than the value bound.
        TabularLearnerConfig dual_cfg;
        dual_cfg.delta = 1.0;
        dual_cfg.mode = TabularMode::kDual;
        dual_cfg.sweeps = 2000000;
        TabularLearner dual(mdp, dual_cfg, splitmix64(spec.seed));
        dual.run();
        TabularLearnerConfig comp_cfg = dual_cfg;
        comp_cfg.mode = TabularMode::kComposite;
        TabularLearner comp(mdp, comp_cfg, splitmix64(spec.seed));
        comp.run();
        report(dual.greedy_policy() == comp.greedy_policy(),
               "dual learner and combined-signal learner agree on the greedy policy");
    }

    return all_ok ? kOk : kFailure;
}

int run_sweep(const ExperimentSpec& spec) {
    const ScenarioConfig cfg = resolve_with_override(spec);
    fs::create_directories(spec.out_dir);
    std::vector<double> grid = spec.delta_grid;
    if (grid.empty())
        for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * i);

    const TabularMdp mdp = build_tabular(cfg);
    const SweepResult result = cmdp_sweep(mdp, cfg.energy.budget, 0.9, grid);

    auto frontier_os = open_out(fs::path(spec.out_dir) / "frontier.csv");
    frontier_os << "delta,avg_cost,avg_energy,feasible\n";
    frontier_os.precision(12);
    for (const auto& p : result.frontier)
        frontier_os << p.delta << ',' << p.avg_cost << ',' << p.avg_energy << ','
                    << (p.feasible ? 1 : 0) << '\n';

    nlohmann::json j;
    j["budget"] = cfg.energy.budget;
    j["feasible"] = result.feasible();
    if (result.feasible()) {
        j["best_delta"] = result.frontier[static_cast<std::size_t>(result.best)].delta;
        j["best_avg_cost"] = result.frontier[static_cast<std::size_t>(result.best)].avg_cost;
        j["best_avg_energy"] =
            result.frontier[static_cast<std::size_t>(result.best)].avg_energy;
    }
    auto summary_os = open_out(fs::path(spec.out_dir) / "summary.json");
    summary_os << j.dump(2) << '\n';

    if (!result.feasible())
        std::cout << "no feasible policy on the grid; frontier written\n";
    return kOk;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec) {
    try {
        if (spec.mode == "train") return run_train(spec);
        if (spec.mode == "evaluate") return run_evaluate(spec);
        if (spec.mode == "baseline") return run_baseline(spec);
        if (spec.mode == "oracle-check") return run_oracle_check(spec);
        if (spec.mode == "sweep") return run_sweep(spec);
        throw ConfigError("unknown mode: " + spec.mode);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const StateExplosion& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const CalibrationInfeasible& e) {
        std::cerr << "calibration infeasible: " << e.what() << '\n';
        return kCalibrationInfeasible;
    } catch (const TrainingDiverged& e) {
        std::cerr << "training diverged: " << e.what() << '\n';
        return kTrainingDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace sagin
