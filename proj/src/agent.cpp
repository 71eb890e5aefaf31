#include "sagin/agent.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace sagin {

double greedy_schedule(long t, double end_value, long ramp_iterations) {
    if (t >= ramp_iterations) return end_value;
    if (t <= 0) return 0.0;
    return end_value * (static_cast<double>(t) / static_cast<double>(ramp_iterations));
}

double update_delta(double delta, double avg_energy, double budget, double step) {
    if (avg_energy > budget) return delta + step;
    return std::max(delta - step, 0.0);
}

namespace {

// Once the budget is met the risk targets are exact zeros and the risk net's
// outputs decay geometrically; without flushing, the tail of that decay runs
// in subnormal arithmetic and training slows by an order of magnitude.
void flush_denormals() {
#if defined(__SSE2__)
    _mm_setcsr(_mm_getcsr() | 0x8040);  // FTZ | DAZ
#endif
}

}  // namespace

namespace {

double min_allowed(const std::vector<double>& q, const ActionMask& mask) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i)
        if (mask.allowed[i] != 0) best = std::min(best, q[i]);
    return best;
}

}  // namespace

void compute_targets(const std::vector<const Transition*>& batch,
                     const DenseNet& cost_target, const DenseNet& risk_target,
                     double discount, std::vector<double>& y_cost,
                     std::vector<double>& y_risk, NetScratch& scratch) {
    y_cost.resize(batch.size());
    y_risk.resize(batch.size());
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const Transition& t = *batch[j];
        y_cost[j] = t.cost + discount * min_allowed(forward_scratch(cost_target,
                                                                    t.next_state, scratch),
                                                    t.next_mask);
        y_risk[j] = t.risk + discount * min_allowed(forward_scratch(risk_target,
                                                                    t.next_state, scratch),
                                                    t.next_mask);
    }
}

void compute_targets(const std::vector<const Transition*>& batch,
                     const DenseNet& cost_target, const DenseNet& risk_target,
                     double discount, std::vector<double>& y_cost,
                     std::vector<double>& y_risk) {
    NetScratch scratch;
    compute_targets(batch, cost_target, risk_target, discount, y_cost, y_risk, scratch);
}

DotsAgent::DotsAgent(const ScenarioConfig& scenario, AgentConfig cfg, std::uint64_t seed)
    : env_(scenario),
      cfg_(std::move(cfg)),
      space_(scenario.num_bs(), scenario.beta_max),
      encoder_(scenario, cfg_.iterations),
      rng_(seed),
      memory_(cfg_.replay_capacity),
      state_(env_.initial_state()),
      delta_(cfg_.delta_init) {
    auto sizes = [&](const std::vector<int>& hidden) {
        std::vector<int> s;
        s.push_back(encoder_.dim());
        s.insert(s.end(), hidden.begin(), hidden.end());
        s.push_back(space_.size());
        return s;
    };
    flush_denormals();
    cost_ = make_target_pair(sizes(cfg_.cost_hidden), rng_, cfg_.cost_opt,
                             cfg_.replace_period);
    risk_ = make_target_pair(sizes(cfg_.risk_hidden), rng_, cfg_.risk_opt,
                             cfg_.replace_period);
    grads_cost_ = zero_gradients(cost_.prediction);
    grads_risk_ = zero_gradients(risk_.prediction);
}

int DotsAgent::greedy_action(const std::vector<double>& features,
                             const ActionMask& mask) const {
    q_combined_ = forward_scratch(cost_.prediction, features, scratch_);
    const std::vector<double>& qbar = forward_scratch(risk_.prediction, features, scratch_);
    for (std::size_t i = 0; i < q_combined_.size(); ++i)
        q_combined_[i] += delta_ * qbar[i];
    apply_filter(q_combined_, mask);
    int best = 0;
    for (std::size_t i = 1; i < q_combined_.size(); ++i)
        if (q_combined_[i] < q_combined_[static_cast<std::size_t>(best)])
            best = static_cast<int>(i);
    return best;
}

int DotsAgent::select_action(const std::vector<double>& features,
                             const ActionMask& mask, double greedy_prob) {
    if (rng_.u01() < greedy_prob) return greedy_action(features, mask);
    // Uniform over the allowed set; (-1, 0) is always in it.
    std::uint64_t pick = rng_.uniform_int(static_cast<std::uint64_t>(mask.allowed_count));
    for (std::size_t i = 0; i < mask.allowed.size(); ++i) {
        if (mask.allowed[i] == 0) continue;
        if (pick == 0) return static_cast<int>(i);
        --pick;
    }
    throw std::logic_error("mask invariant broken: no allowed action");
}

IterationRecord DotsAgent::train_iteration() {
    ++global_iter_;
    IterationRecord rec;
    rec.episode = episodes_done_ + 1;
    rec.iteration = global_iter_;
    rec.delta = delta_;
    rec.greedy_prob =
        greedy_schedule(global_iter_ - 1, cfg_.explore_end, cfg_.explore_ramp);

    const std::vector<double> features = encoder_.encode(state_);
    const ActionMask mask = compute_mask(env_, space_, state_);
    rec.action = select_action(features, mask, rec.greedy_prob);

    const StepOutcome out = env_.step(state_, space_.action(rec.action), rng_);
    const CostRiskSignal sig =
        cost_risk(out, env_.config().drop_penalty, env_.config().energy.budget);
    rec.delay = out.epoch_delay;
    rec.energy_spent = out.energy_spent;
    rec.dropped = out.dropped;

    Transition tr;
    tr.state = features;
    tr.action = rec.action;
    tr.cost = sig.cost;
    tr.risk = sig.risk;
    tr.next_state = encoder_.encode(out.next);
    tr.next_mask = compute_mask(env_, space_, out.next);
    memory_.push(std::move(tr));

    if (memory_.size() >= static_cast<std::size_t>(cfg_.batch_size)) {
        batch_view_.resize(static_cast<std::size_t>(cfg_.batch_size));
        for (auto& slot : batch_view_) slot = &memory_.sample(rng_);

        compute_targets(batch_view_, cost_.target, risk_.target, cfg_.discount,
                        y_cost_, y_risk_, scratch_);

        cost_batch_.features.resize(batch_view_.size());
        cost_batch_.actions.resize(batch_view_.size());
        for (std::size_t j = 0; j < batch_view_.size(); ++j) {
            cost_batch_.features[j] = batch_view_[j]->state;
            cost_batch_.actions[j] = batch_view_[j]->action;
        }
        cost_batch_.targets = y_cost_;
        risk_batch_.features = cost_batch_.features;
        risk_batch_.actions = cost_batch_.actions;
        risk_batch_.targets = y_risk_;

        rec.cost_loss = td_train_step(cost_, cost_batch_, grads_cost_, scratch_);
        rec.risk_loss = td_train_step(risk_, risk_batch_, grads_risk_, scratch_);
        rec.trained = true;
    }
    if (global_iter_ % cfg_.replace_period == 0) {
        cost_.copy_into_target();
        risk_.copy_into_target();
    }

    state_ = out.next;
    if (observer_) observer_(rec);
    return rec;
}

EpisodeReport DotsAgent::run_episode() {
    flush_denormals();  // MXCSR is per-thread; the ctor may have run elsewhere
    // Episode accounting: the energy/epoch counters restart so the risk
    // signal and the outer-loop average refer to this episode alone; queue
    // contents and the waypoint carry over.
    state_.energy = 0.0;
    state_.epoch = 0;

    EpisodeReport rep;
    rep.episode = episodes_done_ + 1;
    rep.delta = delta_;
    rep.action_counts.assign(static_cast<std::size_t>(env_.config().num_bs()) + 2, 0);

    for (long i = 0; i < cfg_.iterations; ++i) {
        const IterationRecord rec = train_iteration();
        rep.avg_delay += rec.delay;
        rep.avg_energy += rec.energy_spent;
        rep.dropped += rec.dropped;
        const Action a = space_.action(rec.action);
        ++rep.action_counts[static_cast<std::size_t>(a.alpha + 1)];
        if (rec.trained) {
            rep.avg_cost_loss += rec.cost_loss;
            rep.avg_risk_loss += rec.risk_loss;
            ++rep.gradient_steps;
        }
        rep.final_greedy_prob = rec.greedy_prob;
    }
    rep.avg_delay /= static_cast<double>(cfg_.iterations);
    rep.avg_energy /= static_cast<double>(cfg_.iterations);
    if (rep.gradient_steps > 0) {
        rep.avg_cost_loss /= static_cast<double>(rep.gradient_steps);
        rep.avg_risk_loss /= static_cast<double>(rep.gradient_steps);
    }
    ++episodes_done_;
    return rep;
}

std::vector<EpisodeReport> DotsAgent::run() {
    std::vector<EpisodeReport> reports;
    reports.reserve(static_cast<std::size_t>(cfg_.episodes));
    for (int k = 0; k < cfg_.episodes; ++k) {
        reports.push_back(run_episode());
        delta_ = update_delta(delta_, reports.back().avg_energy,
                              env_.config().energy.budget, cfg_.delta_step);
    }
    return reports;
}

void DotsAgent::save(std::ostream& os) const {
    os.precision(17);
    os << "dots-checkpoint 1\n";
    os << delta_ << ' ' << episodes_done_ << ' ' << global_iter_ << '\n';
    os << state_.loc << ' ' << state_.fwd_bits << ' ' << state_.fwd_rate << ' '
       << state_.backlog << ' ' << state_.energy << ' ' << state_.epoch << '\n';
    save_net(os, cost_.prediction, cost_.opt);
    save_net(os, risk_.prediction, risk_.opt);
    AdamState dummy_c = make_adam_state(cost_.target);
    AdamState dummy_r = make_adam_state(risk_.target);
    save_net(os, cost_.target, dummy_c);
    save_net(os, risk_.target, dummy_r);
    os << "rng " << rng_ << '\n';
}

void DotsAgent::load(std::istream& is) {
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "dots-checkpoint" || version != 1)
        throw std::runtime_error("checkpoint: bad agent header");
    is >> delta_ >> episodes_done_ >> global_iter_;
    is >> state_.loc >> state_.fwd_bits >> state_.fwd_rate >> state_.backlog >>
        state_.energy >> state_.epoch;
    load_net(is, cost_.prediction, cost_.opt);
    load_net(is, risk_.prediction, risk_.opt);
    AdamState dummy;
    load_net(is, cost_.target, dummy);
    load_net(is, risk_.target, dummy);
    if (!(is >> tag) || tag != "rng")
        throw std::runtime_error("checkpoint: missing rng state");
    is >> rng_;
    if (!is) throw std::runtime_error("checkpoint: truncated agent state");
}

TabularLearner::TabularLearner(const TabularMdp& mdp, TabularLearnerConfig cfg,
                               std::uint64_t seed)
    : mdp_(mdp), cfg_(cfg), rng_(seed) {
    const int n = mdp.num_states();
    q_cost_.resize(static_cast<std::size_t>(n));
    q_risk_.resize(static_cast<std::size_t>(n));
    visits_.resize(static_cast<std::size_t>(n));
    q_sum_cost_.resize(static_cast<std::size_t>(n));
    q_sum_risk_.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const std::size_t k = mdp.allowed(s).size();
        q_cost_[static_cast<std::size_t>(s)].assign(k, 0.0);
        q_risk_[static_cast<std::size_t>(s)].assign(k, 0.0);
        visits_[static_cast<std::size_t>(s)].assign(k, 0);
        q_sum_cost_[static_cast<std::size_t>(s)].assign(k, 0.0);
        q_sum_risk_[static_cast<std::size_t>(s)].assign(k, 0.0);
    }
}

void TabularLearner::td_update(int s, std::size_t slot, double alpha,
                               const TabularMdp::Outcome& o) {
    const std::size_t next = static_cast<std::size_t>(o.next);
    if (cfg_.mode == TabularMode::kComposite) {
        const double bootstrap =
            *std::min_element(q_cost_[next].begin(), q_cost_[next].end());
        const double target = o.cost + cfg_.delta * o.risk + cfg_.discount * bootstrap;
        double& q = q_cost_[static_cast<std::size_t>(s)][slot];
        q += alpha * (target - q);
    } else {
        const double boot_c =
            *std::min_element(q_cost_[next].begin(), q_cost_[next].end());
        const double boot_r =
            *std::min_element(q_risk_[next].begin(), q_risk_[next].end());
        double& qc = q_cost_[static_cast<std::size_t>(s)][slot];
        double& qr = q_risk_[static_cast<std::size_t>(s)][slot];
        qc += alpha * (o.cost + cfg_.discount * boot_c - qc);
        qr += alpha * (o.risk + cfg_.discount * boot_r - qr);
    }
}

void TabularLearner::run() {
    const int n = mdp_.num_states();
    const long tail_start =
        cfg_.sweeps - static_cast<long>(cfg_.tail_fraction * cfg_.sweeps);
    tail_count_ = 0;
    for (long sweep = 0; sweep < cfg_.sweeps; ++sweep) {
        for (int s = 0; s < n; ++s) {
            const auto& allowed = mdp_.allowed(s);
            for (std::size_t slot = 0; slot < allowed.size(); ++slot) {
                // Sample the arrival outcome from the kernel row.
                const auto& row = mdp_.outcomes(s, static_cast<int>(slot));
                const double u = rng_.u01();
                double cum = 0.0;
                const TabularMdp::Outcome* chosen = &row.back();
                for (const auto& o : row) {
                    cum += o.prob;
                    if (u < cum) {
                        chosen = &o;
                        break;
                    }
                }
                long& visit = visits_[static_cast<std::size_t>(s)][slot];
                ++visit;
                const double alpha = cfg_.lr_c / (cfg_.lr_c + static_cast<double>(visit));
                td_update(s, slot, alpha, *chosen);
            }
        }
        if (sweep >= tail_start) {
            ++tail_count_;
            for (int s = 0; s < n; ++s)
                for (std::size_t slot = 0; slot < q_cost_[static_cast<std::size_t>(s)].size();
                     ++slot) {
                    q_sum_cost_[static_cast<std::size_t>(s)][slot] +=
                        q_cost_[static_cast<std::size_t>(s)][slot];
                    q_sum_risk_[static_cast<std::size_t>(s)][slot] +=
                        q_risk_[static_cast<std::size_t>(s)][slot];
                }
        }
    }

    // Averaged iterates over the tail window; with delta folded in for the
    // dual mode so q() is always the combined table.
    q_out_.assign(static_cast<std::size_t>(n), {});
    for (int s = 0; s < n; ++s) {
        const std::size_t k = q_cost_[static_cast<std::size_t>(s)].size();
        q_out_[static_cast<std::size_t>(s)].assign(k, 0.0);
        for (std::size_t slot = 0; slot < k; ++slot) {
            const double denom = static_cast<double>(std::max<long>(tail_count_, 1));
            const double qc = tail_count_ > 0
                                  ? q_sum_cost_[static_cast<std::size_t>(s)][slot] / denom
                                  : q_cost_[static_cast<std::size_t>(s)][slot];
            const double qr = tail_count_ > 0
                                  ? q_sum_risk_[static_cast<std::size_t>(s)][slot] / denom
                                  : q_risk_[static_cast<std::size_t>(s)][slot];
            q_out_[static_cast<std::size_t>(s)][slot] =
                cfg_.mode == TabularMode::kComposite ? qc : qc + cfg_.delta * qr;
        }
    }
}

std::vector<int> TabularLearner::greedy_policy() const {
    std::vector<int> policy(static_cast<std::size_t>(mdp_.num_states()), 0);
    for (int s = 0; s < mdp_.num_states(); ++s) {
        const auto& qs = q_out_[static_cast<std::size_t>(s)];
        std::size_t best = 0;
        for (std::size_t slot = 1; slot < qs.size(); ++slot)
            if (qs[slot] < qs[best]) best = slot;
        policy[static_cast<std::size_t>(s)] = mdp_.allowed(s)[best];
    }
    return policy;
}

}  // namespace sagin
