// Experiment front door: train the scheduler, evaluate a checkpoint, run the
// RPC/SPC baselines, verify against the exact tabular solver, or sweep the
// constraint weight on a small scenario.

#include <CLI11.hpp>

#include "sagin/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"UAV task-scheduling experiments (delay-oriented, energy-budgeted)"};
    app.require_subcommand(1);

    sagin::ExperimentSpec spec;
    long iterations = -1;
    int episodes = -1;
    long explore_ramp = -1;
    std::vector<int> cost_hidden, risk_hidden;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", spec.scenario,
                        "Scenario preset (paper|desk|tiny) or file path");
        cmd->add_option("--seed", spec.seed, "Master seed");
        cmd->add_option("--epsilon", spec.budget_override,
                        "Energy budget override, J per epoch");
        cmd->add_option("--out", spec.out_dir, "Output directory");
    };

    CLI::App* train = app.add_subcommand("train", "Train the dual-Q scheduler");
    add_common(train);
    train->add_option("--episodes", episodes, "Outer-loop episodes (K)");
    train->add_option("--iterations", iterations, "Iterations per episode (T)");
    train->add_option("--replicas", spec.replicas, "Independent replicas")
        ->check(CLI::PositiveNumber);
    train->add_option("--explore-ramp", explore_ramp,
                      "Iterations over which the greedy probability ramps to its "
                      "final value (defaults to one episode)");
    train->add_option("--batch", spec.agent.batch_size, "Mini-batch size");
    train->add_option("--capacity", spec.agent.replay_capacity, "Replay capacity");
    train->add_option("--replace-period", spec.agent.replace_period,
                      "Iterations between target-network replacements");
    train->add_option("--delta-init", spec.agent.delta_init, "Initial constraint weight");
    train->add_option("--delta-step", spec.agent.delta_step, "Constraint weight step");
    train->add_option("--discount", spec.agent.discount, "Shared discount factor");
    train->add_option("--lr", spec.agent.cost_opt.learning_rate, "Cost-net learning rate");
    train->add_option("--lr-risk", spec.agent.risk_opt.learning_rate,
                      "Risk-net learning rate");
    train->add_option("--cost-hidden", cost_hidden, "Cost-net hidden sizes")
        ->delimiter(',');
    train->add_option("--risk-hidden", risk_hidden, "Risk-net hidden sizes")
        ->delimiter(',');

    CLI::App* evaluate = app.add_subcommand("evaluate", "Run a trained policy over flights");
    add_common(evaluate);
    evaluate->add_option("--checkpoint", spec.checkpoint, "Checkpoint to load")->required();
    evaluate->add_option("--flights", spec.flights, "Flights to evaluate");
    evaluate->add_option("--iterations", iterations,
                         "Iterations per episode used at training time");
    evaluate->add_option("--cost-hidden", cost_hidden, "Cost-net hidden sizes")
        ->delimiter(',');
    evaluate->add_option("--risk-hidden", risk_hidden, "Risk-net hidden sizes")
        ->delimiter(',');

    CLI::App* baseline = app.add_subcommand("baseline", "Run the RPC or SPC baseline");
    add_common(baseline);
    baseline->add_option("--kind", spec.baseline_kind, "rpc or spc")->required();
    baseline->add_option("--flights", spec.flights, "Flights to evaluate");
    baseline->add_option("--spc-samples", spec.spc_samples,
                         "Calibration flights per grid point");

    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "Verify sampled learning against the exact tabular solution");
    add_common(oracle);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Solve a small scenario across a grid of constraint weights");
    add_common(sweep);
    sweep->add_option("--delta-grid", spec.delta_grid, "Weights to solve for")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    spec.mode = app.get_subcommands().front()->get_name();
    // The tabular check and weight sweep are only exact on small instances.
    if ((oracle->parsed() || sweep->parsed()) && spec.scenario == "paper")
        spec.scenario = "tiny";
    if (episodes > 0) spec.agent.episodes = episodes;
    if (iterations > 0) spec.agent.iterations = iterations;
    spec.agent.explore_ramp = explore_ramp > 0 ? explore_ramp : spec.agent.iterations;
    if (!cost_hidden.empty()) spec.agent.cost_hidden = cost_hidden;
    if (!risk_hidden.empty()) spec.agent.risk_hidden = risk_hidden;

    return sagin::run_experiment(spec);
}
