#pragma once

#include <functional>
#include <iosfwd>
#include <optional>

#include "sagin/env.hpp"
#include "sagin/mdp.hpp"
#include "sagin/net.hpp"
#include "sagin/oracle.hpp"
#include "sagin/replay.hpp"

namespace sagin {

/// Probability of acting greedily at global iteration t: ramps linearly from
/// 0 to end_value over ramp_iterations, then stays there. The complement is
/// the exploration probability.
double greedy_schedule(long t, double end_value = 0.9995, long ramp_iterations = 35000);

/// Outer-loop update of the constraint weight: raise by step on a violated
/// episode, otherwise lower, never below zero.
double update_delta(double delta, double avg_energy, double budget, double step);

struct AgentConfig {
    double discount = 0.99;  // shared by the cost and risk learners
    std::vector<int> cost_hidden = {256, 128, 128, 64};
    std::vector<int> risk_hidden = {512, 256, 128, 128};
    AdamParams cost_opt;
    AdamParams risk_opt;
    int batch_size = 64;
    std::size_t replay_capacity = 50000;
    long replace_period = 200;
    double explore_end = 0.9995;
    long explore_ramp = 35000;
    double delta_init = 0.0;
    double delta_step = 0.5;
    int episodes = 100;       // K
    long iterations = 35000;  // T per episode
};

struct EpisodeReport {
    int episode = 0;
    double avg_delay = 0.0;
    double avg_energy = 0.0;
    long dropped = 0;
    double delta = 0.0;              // weight in force during the episode
    double final_greedy_prob = 0.0;
    double avg_cost_loss = 0.0;
    double avg_risk_loss = 0.0;
    long gradient_steps = 0;
    std::vector<long> action_counts;  // idle, satellite, BS 1..N
};

/// Everything one training iteration produced; consumed by metrics sinks.
struct IterationRecord {
    int episode = 0;
    long iteration = 0;  // global, 1-based
    double delay = 0.0;
    double energy_spent = 0.0;
    int dropped = 0;
    int action = 0;  // ActionSpace index
    double greedy_prob = 0.0;
    double delta = 0.0;
    bool trained = false;
    double cost_loss = 0.0;
    double risk_loss = 0.0;
};

/// Bootstrapped regression targets for a replay mini-batch; the min over
/// next-state actions skips masked ones.
void compute_targets(const std::vector<const Transition*>& batch,
                     const DenseNet& cost_target, const DenseNet& risk_target,
                     double discount, std::vector<double>& y_cost,
                     std::vector<double>& y_risk);
void compute_targets(const std::vector<const Transition*>& batch,
                     const DenseNet& cost_target, const DenseNet& risk_target,
                     double discount, std::vector<double>& y_cost,
                     std::vector<double>& y_risk, NetScratch& scratch);

/// Dual deep Q-learner: one net pair estimates long-run cost, the other
/// long-run risk; actions minimize Q + delta * Qbar over allowed actions,
/// and delta is searched between episodes.
class DotsAgent {
public:
    DotsAgent(const ScenarioConfig& scenario, AgentConfig cfg, std::uint64_t seed);

    int select_action(const std::vector<double>& features, const ActionMask& mask,
                      double greedy_prob);
    int greedy_action(const std::vector<double>& features, const ActionMask& mask) const;

    IterationRecord train_iteration();
    EpisodeReport run_episode();
    std::vector<EpisodeReport> run();

    void set_observer(std::function<void(const IterationRecord&)> observer) {
        observer_ = std::move(observer);
    }

    const Env& env() const { return env_; }
    const ActionSpace& action_space() const { return space_; }
    const StateEncoder& encoder() const { return encoder_; }
    const EnvState& state() const { return state_; }
    double delta() const { return delta_; }
    void set_delta(double d) { delta_ = d; }
    int episodes_done() const { return episodes_done_; }
    long global_iteration() const { return global_iter_; }
    const ReplayMemory& memory() const { return memory_; }
    const TargetPair& cost_pair() const { return cost_; }
    const TargetPair& risk_pair() const { return risk_; }

    void save(std::ostream& os) const;
    void load(std::istream& is);

private:
    Env env_;
    AgentConfig cfg_;
    ActionSpace space_;
    StateEncoder encoder_;
    Rng rng_;
    TargetPair cost_;
    TargetPair risk_;
    ReplayMemory memory_;
    EnvState state_;
    double delta_;
    int episodes_done_ = 0;
    long global_iter_ = 0;
    std::function<void(const IterationRecord&)> observer_;

    // Scratch reused across iterations; the agent is single-threaded.
    mutable NetScratch scratch_;
    mutable std::vector<double> q_combined_;
    NetGradients grads_cost_;
    NetGradients grads_risk_;
    TdBatch cost_batch_;
    TdBatch risk_batch_;
    std::vector<const Transition*> batch_view_;
    std::vector<double> y_cost_;
    std::vector<double> y_risk_;
};

enum class TabularMode { kDual, kComposite };

struct TabularLearnerConfig {
    double discount = 0.9;
    double delta = 0.0;
    TabularMode mode = TabularMode::kComposite;
    long sweeps = 24000000;     // round-robin passes over every (s, a)
    double lr_c = 50.0;         // learning rate c / (c + visits)
    double tail_fraction = 0.5; // averaged-iterate window at the end
};

/// Sample-based risk-sensitive Q-learning on an enumerated MDP. kComposite
/// learns one table on the combined signal cost + delta * risk; kDual keeps
/// separate cost and risk tables, each bootstrapping its own greedy min, and
/// acts on their delta-weighted sum.
class TabularLearner {
public:
    TabularLearner(const TabularMdp& mdp, TabularLearnerConfig cfg, std::uint64_t seed);

    void run();

    /// Combined table (averaged over the tail window), slot-aligned with the
    /// MDP's allowed actions.
    const std::vector<std::vector<double>>& q() const { return q_out_; }
    std::vector<int> greedy_policy() const;

private:
    void td_update(int s, std::size_t slot, double alpha, const TabularMdp::Outcome& o);

    const TabularMdp& mdp_;
    TabularLearnerConfig cfg_;
    Rng rng_;
    std::vector<std::vector<double>> q_cost_;
    std::vector<std::vector<double>> q_risk_;
    std::vector<std::vector<long>> visits_;
    std::vector<std::vector<double>> q_sum_cost_;
    std::vector<std::vector<double>> q_sum_risk_;
    long tail_count_ = 0;
    std::vector<std::vector<double>> q_out_;
};

}  // namespace sagin
