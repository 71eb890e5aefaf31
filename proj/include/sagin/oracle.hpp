#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "sagin/env.hpp"
#include "sagin/mdp.hpp"

namespace sagin {

/// build_tabular refuses scenarios whose reachable state space exceeds the
/// cap, reporting how far enumeration got.
struct StateExplosion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact finite MDP over the reachable reduced states of a small scenario.
/// The reduced state drops cumulative energy and the epoch counter; the risk
/// table therefore carries the per-epoch overshoot max(e - budget, 0), which
/// is Markovian on this space. Feasibility of a policy is still judged on
/// true long-run average energy (see average_under_policy).
class TabularMdp {
public:
    struct ReducedState {
        int loc = 0;
        double fwd_bits = 0.0;
        double fwd_rate = 0.0;
        int backlog = 0;

        auto operator<=>(const ReducedState&) const = default;
    };

    /// One possible resolution of (state, action): arrival-count outcome with
    /// its probability, the signals generated, and the successor index.
    struct Outcome {
        double prob = 0.0;
        double cost = 0.0;
        double risk = 0.0;
        double energy = 0.0;
        double delay = 0.0;
        int next = 0;
    };

    const Env& env() const { return env_; }
    const ActionSpace& space() const { return space_; }
    int num_states() const { return static_cast<int>(states_.size()); }
    int initial_state() const { return initial_; }
    const ReducedState& state(int i) const { return states_[static_cast<std::size_t>(i)]; }
    EnvState env_state(int i) const;
    int index_of(const EnvState& s) const;

    /// Allowed action indices (into the ActionSpace), ascending.
    const std::vector<int>& allowed(int state) const {
        return allowed_[static_cast<std::size_t>(state)];
    }
    /// Outcomes for the k-th allowed action of `state`.
    const std::vector<Outcome>& outcomes(int state, int slot) const {
        return kernel_[static_cast<std::size_t>(state)][static_cast<std::size_t>(slot)];
    }

    friend TabularMdp build_tabular(const ScenarioConfig& cfg, std::size_t max_states);

private:
    explicit TabularMdp(const ScenarioConfig& cfg)
        : env_(cfg), space_(cfg.num_bs(), cfg.beta_max) {}

    Env env_;
    ActionSpace space_;
    std::vector<ReducedState> states_;
    std::map<ReducedState, int> index_;
    std::vector<std::vector<int>> allowed_;
    std::vector<std::vector<std::vector<Outcome>>> kernel_;
    int initial_ = 0;
};

TabularMdp build_tabular(const ScenarioConfig& cfg, std::size_t max_states = 100000);

/// Q-table aligned with the MDP's allowed-action slots, plus the greedy
/// policy it induces (global action index per state, ties to lowest index).
struct OracleSolution {
    std::vector<std::vector<double>> q;
    std::vector<double> value;
    std::vector<int> greedy;
    long sweeps = 0;
    double residual = 0.0;
};

/// Bellman minimization on the combined reward cost + delta * risk; iterates
/// until the sup-norm change drops below tol. cost_shift adds a constant to
/// every per-epoch cost (the greedy policy must not care).
OracleSolution value_iteration(const TabularMdp& mdp, double delta, double discount,
                               double tol = 1e-9, double cost_shift = 0.0);

struct PolicyAverages {
    double cost = 0.0;
    double energy = 0.0;
    double delay = 0.0;
};

/// Long-run per-epoch averages of a deterministic policy, computed by
/// iterating the state distribution (Cesaro-averaged to handle the periodic
/// location cycle).
PolicyAverages average_under_policy(const TabularMdp& mdp, const std::vector<int>& policy,
                                    long burn_in = 2000, long horizon = 200000);

struct SweepPoint {
    double delta = 0.0;
    double avg_cost = 0.0;
    double avg_energy = 0.0;
    bool feasible = false;
};

struct SweepResult {
    std::vector<SweepPoint> frontier;
    int best = -1;  // index into frontier, -1 when nothing is feasible
    std::vector<int> best_policy;

    bool feasible() const { return best >= 0; }
};

/// Solves the MDP for every delta in the ascending grid and returns the
/// cheapest policy whose long-run average energy fits the budget, together
/// with the whole frontier.
SweepResult cmdp_sweep(const TabularMdp& mdp, double budget, double discount,
                       const std::vector<double>& delta_grid, double tol = 1e-9);

/// Dumps a solution as a portable table (one line per state-action) for
/// regression pinning.
void dump_solution(std::ostream& os, const TabularMdp& mdp, const OracleSolution& sol);

}  // namespace sagin
