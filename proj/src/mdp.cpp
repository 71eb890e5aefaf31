#include "sagin/mdp.hpp"

#include <algorithm>
#include <stdexcept>

namespace sagin {

ActionSpace::ActionSpace(int num_bs, int beta_max) : beta_max_(beta_max) {
    actions_.reserve(1 + static_cast<std::size_t>(num_bs + 1) * beta_max);
    actions_.push_back(Action{Action::kNone, 0});
    for (int alpha = 0; alpha <= num_bs; ++alpha)
        for (int beta = 1; beta <= beta_max; ++beta)
            actions_.push_back(Action{alpha, beta});
}

int ActionSpace::index_of(Action a) const {
    if (a.alpha == Action::kNone && a.beta == 0) return 0;
    if (a.beta < 1 || a.beta > beta_max_ || a.alpha < 0)
        throw std::out_of_range("action not in the enumerated space");
    const int idx = 1 + a.alpha * beta_max_ + (a.beta - 1);
    if (idx >= size()) throw std::out_of_range("action not in the enumerated space");
    return idx;
}

ActionMask compute_mask(const Env& env, const ActionSpace& space, const EnvState& s) {
    ActionMask m;
    m.allowed.assign(static_cast<std::size_t>(space.size()), 0);
    m.allowed[0] = 1;  // (-1, 0) is always available
    m.allowed_count = 1;
    if (s.forwarding_busy()) return m;

    const int beta_cap = std::min(s.backlog, env.config().beta_max);
    const Waypoint& wp =
        env.config().trajectory.waypoints[static_cast<std::size_t>(s.loc)];
    for (int i = 1; i < space.size(); ++i) {
        const Action a = space.action(i);
        int cap = 0;
        if (a.alpha == Action::kSatellite) {
            cap = beta_cap;
        } else if (wp.covers(a.alpha)) {
            cap = std::min(beta_cap, env.feasible_beta_max(s.loc, a.alpha));
        }
        if (a.beta <= cap) {
            m.allowed[static_cast<std::size_t>(i)] = 1;
            ++m.allowed_count;
        }
    }
    return m;
}

double cost_signal(const StepOutcome& out, double drop_penalty) {
    return out.epoch_delay + drop_penalty * out.dropped;
}

double risk_signal(const EnvState& state_after, double budget) {
    const double limit = budget * static_cast<double>(state_after.epoch);
    return state_after.energy > limit ? state_after.energy - limit : 0.0;
}

CostRiskSignal cost_risk(const StepOutcome& out, double drop_penalty, double budget) {
    CostRiskSignal sig;
    sig.cost = cost_signal(out, drop_penalty);
    sig.risk = risk_signal(out.next, budget);
    sig.error_flag = sig.risk > 0.0;
    return sig;
}

StateEncoder::StateEncoder(const ScenarioConfig& cfg, long epochs_per_episode)
    : num_waypoints_(cfg.num_waypoints()),
      queue_size_(static_cast<double>(cfg.queue_size)),
      energy_scale_(cfg.energy.budget * static_cast<double>(epochs_per_episode)) {}

std::vector<double> StateEncoder::encode(const EnvState& s) const {
    std::vector<double> f(static_cast<std::size_t>(dim()), 0.0);
    f[static_cast<std::size_t>(s.loc)] = 1.0;
    f[static_cast<std::size_t>(num_waypoints_)] = s.forwarding_busy() ? 1.0 : 0.0;
    f[static_cast<std::size_t>(num_waypoints_) + 1] = s.backlog / queue_size_;
    // Saturated: with an unattainable budget the raw ratio is unbounded and
    // would swamp both the net and the filter constant.
    f[static_cast<std::size_t>(num_waypoints_) + 2] =
        std::min(s.energy / energy_scale_, 4.0);
    return f;
}

}  // namespace sagin
