#include "sagin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <string>

namespace sagin {

EnvState TabularMdp::env_state(int i) const {
    const ReducedState& r = states_[static_cast<std::size_t>(i)];
    EnvState s;
    s.loc = r.loc;
    s.fwd_bits = r.fwd_bits;
    s.fwd_rate = r.fwd_rate;
    s.backlog = r.backlog;
    return s;
}

int TabularMdp::index_of(const EnvState& s) const {
    const ReducedState key{s.loc, s.fwd_bits, s.fwd_rate, s.backlog};
    const auto it = index_.find(key);
    if (it == index_.end()) throw std::out_of_range("state not enumerated");
    return it->second;
}

TabularMdp build_tabular(const ScenarioConfig& cfg, std::size_t max_states) {
    TabularMdp mdp(cfg);
    const Env& env = mdp.env_;
    const ActionSpace& space = mdp.space_;
    const auto pmf = truncated_poisson_pmf(cfg.arrivals.rate, cfg.arrivals.truncation);
    const double budget = cfg.energy.budget;

    auto intern = [&](const EnvState& s) {
        const TabularMdp::ReducedState key{s.loc, s.fwd_bits, s.fwd_rate, s.backlog};
        const auto it = mdp.index_.find(key);
        if (it != mdp.index_.end()) return it->second;
        if (mdp.states_.size() >= max_states)
            throw StateExplosion("tabular enumeration exceeded " +
                                 std::to_string(max_states) + " states");
        const int id = static_cast<int>(mdp.states_.size());
        mdp.states_.push_back(key);
        mdp.index_.emplace(key, id);
        return id;
    };

    std::deque<int> frontier;
    mdp.initial_ = intern(env.initial_state());
    frontier.push_back(mdp.initial_);
    mdp.allowed_.resize(1);
    mdp.kernel_.resize(1);

    while (!frontier.empty()) {
        const int id = frontier.front();
        frontier.pop_front();
        const EnvState s = mdp.env_state(id);
        const ActionMask m = compute_mask(env, space, s);

        std::vector<int> allowed;
        std::vector<std::vector<TabularMdp::Outcome>> rows;
        for (int ai = 0; ai < space.size(); ++ai) {
            if (!m.is_allowed(ai)) continue;
            allowed.push_back(ai);
            std::vector<TabularMdp::Outcome> row;
            row.reserve(pmf.size());
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                const StepOutcome out =
                    env.step_with_arrivals(s, space.action(ai), static_cast<int>(k));
                TabularMdp::Outcome o;
                o.prob = pmf[k];
                o.delay = out.epoch_delay;
                o.cost = cost_signal(out, cfg.drop_penalty);
                o.energy = out.energy_spent;
                // Per-epoch surrogate of the energy risk; exact on this
                // reduced space because e depends only on (state, action).
                o.risk = std::max(out.energy_spent - budget, 0.0);
                const std::size_t before = mdp.states_.size();
                o.next = intern(out.next);
                if (mdp.states_.size() > before) {
                    frontier.push_back(o.next);
                    mdp.allowed_.emplace_back();
                    mdp.kernel_.emplace_back();
                }
                row.push_back(o);
            }
            rows.push_back(std::move(row));
        }
        mdp.allowed_[static_cast<std::size_t>(id)] = std::move(allowed);
        mdp.kernel_[static_cast<std::size_t>(id)] = std::move(rows);
    }
    return mdp;
}

OracleSolution value_iteration(const TabularMdp& mdp, double delta, double discount,
                               double tol, double cost_shift) {
    const int n = mdp.num_states();
    OracleSolution sol;
    sol.q.assign(static_cast<std::size_t>(n), {});
    for (int s = 0; s < n; ++s)
        sol.q[static_cast<std::size_t>(s)].assign(mdp.allowed(s).size(), 0.0);
    sol.value.assign(static_cast<std::size_t>(n), 0.0);

    auto backup = [&](int s, std::size_t slot, const std::vector<double>& value) {
        double q = 0.0;
        for (const auto& o : mdp.outcomes(s, static_cast<int>(slot)))
            q += o.prob * (o.cost + cost_shift + delta * o.risk +
                           discount * value[static_cast<std::size_t>(o.next)]);
        return q;
    };

    double change = 0.0;
    do {
        change = 0.0;
        for (int s = 0; s < n; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t slot = 0; slot < mdp.allowed(s).size(); ++slot) {
                const double q = backup(s, slot, sol.value);
                const double prev = sol.q[static_cast<std::size_t>(s)][slot];
                change = std::max(change, std::abs(q - prev));
                sol.q[static_cast<std::size_t>(s)][slot] = q;
                best = std::min(best, q);
            }
            sol.value[static_cast<std::size_t>(s)] = best;
        }
        ++sol.sweeps;
    } while (change > tol);

    sol.residual = change;
    sol.greedy.assign(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
        const auto& qs = sol.q[static_cast<std::size_t>(s)];
        std::size_t best = 0;
        for (std::size_t slot = 1; slot < qs.size(); ++slot)
            if (qs[slot] < qs[best]) best = slot;  // ties keep the lowest index
        sol.greedy[static_cast<std::size_t>(s)] = mdp.allowed(s)[best];
    }
    return sol;
}

namespace {

std::size_t slot_of(const TabularMdp& mdp, int state, int action) {
    const auto& allowed = mdp.allowed(state);
    const auto it = std::find(allowed.begin(), allowed.end(), action);
    if (it == allowed.end())
        throw InvalidAction("policy picks a masked action at state " +
                            std::to_string(state));
    return static_cast<std::size_t>(it - allowed.begin());
}

}  // namespace

PolicyAverages average_under_policy(const TabularMdp& mdp, const std::vector<int>& policy,
                                    long burn_in, long horizon) {
    const int n = mdp.num_states();
    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
    dist[static_cast<std::size_t>(mdp.initial_state())] = 1.0;
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);

    PolicyAverages acc;
    long counted = 0;
    for (long t = 0; t < burn_in + horizon; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < n; ++s) {
            const double p = dist[static_cast<std::size_t>(s)];
            if (p == 0.0) continue;
            const std::size_t slot =
                slot_of(mdp, s, policy[static_cast<std::size_t>(s)]);
            for (const auto& o : mdp.outcomes(s, static_cast<int>(slot))) {
                next[static_cast<std::size_t>(o.next)] += p * o.prob;
                if (t >= burn_in) {
                    acc.cost += p * o.prob * o.cost;
                    acc.energy += p * o.prob * o.energy;
                    acc.delay += p * o.prob * o.delay;
                }
            }
        }
        dist.swap(next);
        if (t >= burn_in) ++counted;
    }
    acc.cost /= static_cast<double>(counted);
    acc.energy /= static_cast<double>(counted);
    acc.delay /= static_cast<double>(counted);
    return acc;
}

SweepResult cmdp_sweep(const TabularMdp& mdp, double budget, double discount,
                       const std::vector<double>& delta_grid, double tol) {
    SweepResult result;
    double best_cost = std::numeric_limits<double>::infinity();
    for (double delta : delta_grid) {
        const OracleSolution sol = value_iteration(mdp, delta, discount, tol);
        const PolicyAverages avg = average_under_policy(mdp, sol.greedy);
        SweepPoint point{delta, avg.cost, avg.energy, avg.energy <= budget};
        if (point.feasible && point.avg_cost < best_cost) {
            best_cost = point.avg_cost;
            result.best = static_cast<int>(result.frontier.size());
            result.best_policy = sol.greedy;
        }
        result.frontier.push_back(point);
    }
    return result;
}

void dump_solution(std::ostream& os, const TabularMdp& mdp, const OracleSolution& sol) {
    os.precision(17);
    os << "state loc fwd_bits backlog action_alpha action_beta q greedy\n";
    for (int s = 0; s < mdp.num_states(); ++s) {
        const auto& red = mdp.state(s);
        const auto& allowed = mdp.allowed(s);
        for (std::size_t slot = 0; slot < allowed.size(); ++slot) {
            const Action a = mdp.space().action(allowed[slot]);
            os << s << ' ' << red.loc << ' ' << red.fwd_bits << ' ' << red.backlog
               << ' ' << a.alpha << ' ' << a.beta << ' '
               << sol.q[static_cast<std::size_t>(s)][slot] << ' '
               << (sol.greedy[static_cast<std::size_t>(s)] == allowed[slot] ? 1 : 0)
               << '\n';
        }
    }
}

}  // namespace sagin
