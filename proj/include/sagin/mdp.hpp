#pragma once

#include <cstdint>
#include <vector>

#include "sagin/env.hpp"

namespace sagin {

/// Fixed enumeration of the discrete action set: (-1,0) first, then the
/// satellite (0, 1..beta_max), then each BS n (n, 1..beta_max). The order is
/// a stable contract; replay records and checkpoints index into it.
class ActionSpace {
public:
    ActionSpace(int num_bs, int beta_max);

    int size() const { return static_cast<int>(actions_.size()); }
    Action action(int index) const { return actions_.at(static_cast<std::size_t>(index)); }
    int index_of(Action a) const;

private:
    int beta_max_;
    std::vector<Action> actions_;
};

struct ActionMask {
    std::vector<std::uint8_t> allowed;
    int allowed_count = 0;

    bool is_allowed(int index) const {
        return allowed[static_cast<std::size_t>(index)] != 0;
    }
    int size() const { return static_cast<int>(allowed.size()); }
};

/// Allowed actions at a state: idle always; offloads need an idle interface,
/// an available destination, enough backlog, and (for a BS) a transmission
/// that finishes inside the remaining coverage.
ActionMask compute_mask(const Env& env, const ActionSpace& space, const EnvState& s);

/// Per-epoch cost: delay plus the weighted count of dropped tasks.
double cost_signal(const StepOutcome& out, double drop_penalty);

/// Energy overshoot of the time-scaled budget at the state reached after a
/// step; zero at non-error states.
double risk_signal(const EnvState& state_after, double budget);

struct CostRiskSignal {
    double cost = 0.0;
    double risk = 0.0;
    bool error_flag = false;
};

CostRiskSignal cost_risk(const StepOutcome& out, double drop_penalty, double budget);

/// Normalized network input: one-hot waypoint, F flag, H/rho, E/(eps*T).
/// Injective on reachable states for a fixed episode length.
class StateEncoder {
public:
    StateEncoder(const ScenarioConfig& cfg, long epochs_per_episode);

    int dim() const { return num_waypoints_ + 3; }
    std::vector<double> encode(const EnvState& s) const;

private:
    int num_waypoints_;
    double queue_size_;
    double energy_scale_;
};

}  // namespace sagin
