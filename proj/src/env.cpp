#include "sagin/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sagin {

double bs_pathloss(const PathlossCoeffs& c, double x_m, double theta_deg) {
    if (!(x_m > 0.0)) throw std::domain_error("bs_pathloss: distance must be > 0");
    return 10.0 * c.a0 * std::log10(x_m) +
           c.b0 * (theta_deg - c.theta0) * std::exp((c.theta0 - theta_deg) / c.c0) +
           c.eta0;
}

Env::Env(ScenarioConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

const Waypoint& Env::waypoint(int loc) const {
    return cfg_.trajectory.waypoints.at(static_cast<std::size_t>(loc));
}

double Env::sat_rate() const {
    const RadioParams& r = cfg_.radio;
    const double snr = r.p_sat * r.sat_channel_gain / r.noise_power(r.w_sat);
    return r.w_sat * std::log2(1.0 + snr);
}

double Env::bs_rate(int loc, int n) const {
    const BsCoverage* cov = waypoint(loc).find(n);
    if (cov == nullptr)
        throw UnavailableDestination("BS " + std::to_string(n) +
                                     " does not cover waypoint " + std::to_string(loc));
    const RadioParams& r = cfg_.radio;
    const double pl_db = bs_pathloss(r.pathloss, cov->x_m, cov->theta_deg);
    const double snr = r.p_bs * std::pow(10.0, -pl_db / 10.0) / r.noise_power(r.w_bs);
    return r.w_bs * std::log2(1.0 + snr);
}

double Env::link_rate(int loc, int alpha) const {
    if (alpha == Action::kSatellite) return sat_rate();
    return bs_rate(loc, alpha);
}

int Env::local_capacity() const {
    return static_cast<int>(std::floor(cfg_.compute.f_uav * cfg_.epoch_seconds /
                                       (cfg_.task.phi * cfg_.task.gamma)));
}

double Env::offload_compute_delay(int alpha, int beta) const {
    if (beta == 0) return 0.0;
    if (alpha == Action::kNone)
        throw InvalidAction("cannot offload without a destination");
    return beta * cfg_.task.phi * cfg_.task.gamma / cfg_.compute.f_of(alpha);
}

double Env::local_delay(int backlog, int queued) const {
    const double per_task = cfg_.task.phi * cfg_.task.gamma / cfg_.compute.f_uav;
    return std::min(local_capacity(), backlog) * per_task +
           queued * cfg_.epoch_seconds;
}

double Env::tx_delay(int loc, int alpha, int beta) const {
    if (beta == 0) return 0.0;
    double d = beta * cfg_.task.phi / link_rate(loc, alpha);
    if (alpha == Action::kSatellite) d += cfg_.radio.sat_prop_delay;
    return d;
}

double Env::comm_energy(int loc, int alpha, int beta) const {
    if (beta == 0) return 0.0;
    // Transmit time only; propagation consumes no transmit power.
    const double tx_time = beta * cfg_.task.phi / link_rate(loc, alpha);
    return (alpha == Action::kSatellite ? cfg_.radio.p_sat : cfg_.radio.p_bs) * tx_time;
}

double Env::comp_energy(int backlog) const {
    const double cycles = std::min(backlog * cfg_.task.phi * cfg_.task.gamma,
                                   cfg_.compute.f_uav * cfg_.epoch_seconds);
    return cycles * cfg_.energy.kappa * cfg_.compute.f_uav * cfg_.compute.f_uav;
}

Env::QueueUpdate Env::queue_update(int backlog, int beta, int arrivals) const {
    if (beta > backlog)
        throw InvalidAction("cannot offload " + std::to_string(beta) +
                            " tasks from a backlog of " + std::to_string(backlog));
    QueueUpdate q;
    q.queued = std::max(backlog - local_capacity() - beta, 0);
    q.next_backlog = std::min(q.queued + arrivals, cfg_.queue_size);
    q.dropped = std::max(q.queued + arrivals - cfg_.queue_size, 0);
    return q;
}

int Env::feasible_beta_max(int loc, int n) const {
    const BsCoverage* cov = waypoint(loc).find(n);
    if (cov == nullptr)
        throw UnavailableDestination("BS " + std::to_string(n) +
                                     " does not cover waypoint " + std::to_string(loc));
    const int w = cfg_.num_waypoints();
    const int coverage = cov->coverage_remaining;
    int best = 0;
    double capacity = 0.0;
    int next_beta = 1;
    // Transmission starts in the decision epoch, so the coverage window
    // contributes `coverage` epochs of capacity at per-waypoint rates.
    for (int j = 0; j < coverage && next_beta <= cfg_.beta_max; ++j) {
        capacity += bs_rate((loc + j) % w, n) * cfg_.epoch_seconds;
        while (next_beta <= cfg_.beta_max && next_beta * cfg_.task.phi <= capacity) {
            best = next_beta;
            ++next_beta;
        }
    }
    return best;
}

int Env::sample_arrivals(Rng& rng) const {
    return rng.poisson_trunc(cfg_.arrivals.rate, cfg_.arrivals.truncation);
}

void Env::validate_action(const EnvState& s, Action a) const {
    if (a.beta < 0 || a.beta > cfg_.beta_max)
        throw InvalidAction("beta out of range: " + std::to_string(a.beta));
    if (a.alpha == Action::kNone) {
        if (a.beta != 0) throw InvalidAction("alpha = -1 requires beta = 0");
        return;
    }
    if (a.alpha < Action::kNone || a.alpha > cfg_.num_bs())
        throw InvalidAction("unknown destination: " + std::to_string(a.alpha));
    if (a.beta == 0)
        throw InvalidAction("offload destination given but beta = 0");
    if (s.forwarding_busy())
        throw InvalidAction("forwarding queue busy (F = 1)");
    if (a.beta > s.backlog)
        throw InvalidAction("cannot offload more tasks than the backlog holds");
    if (a.alpha != Action::kSatellite) {
        if (!waypoint(s.loc).covers(a.alpha))
            throw UnavailableDestination("BS " + std::to_string(a.alpha) +
                                         " does not cover waypoint " +
                                         std::to_string(s.loc));
        if (a.beta > feasible_beta_max(s.loc, a.alpha))
            throw InvalidAction("transmission would outlast BS coverage");
    }
}

StepOutcome Env::step(const EnvState& s, Action a, Rng& rng) const {
    validate_action(s, a);
    return step_with_arrivals(s, a, sample_arrivals(rng));
}

StepOutcome Env::step_with_arrivals(const EnvState& s, Action a, int arrivals) const {
    validate_action(s, a);

    StepOutcome out;
    EnvState& next = out.next;
    next = s;

    double d_tx = 0.0, d_off = 0.0, e_o = 0.0;
    if (a.offloads()) {
        // Offloading is only legal with an idle interface, so enqueueing
        // cannot clobber older content.
        next.fwd_bits = a.beta * cfg_.task.phi;
        next.fwd_rate = link_rate(s.loc, a.alpha);
        d_tx = tx_delay(s.loc, a.alpha, a.beta);
        d_off = offload_compute_delay(a.alpha, a.beta);
        e_o = comm_energy(s.loc, a.alpha, a.beta);
    }
    // Transmission during this epoch, at the rate bound when the content
    // was enqueued. Newly offloaded bits start draining immediately.
    if (next.fwd_bits > 0.0) {
        next.fwd_bits = std::max(next.fwd_bits - next.fwd_rate * cfg_.epoch_seconds, 0.0);
        if (next.fwd_bits == 0.0) next.fwd_rate = 0.0;
    }

    out.arrivals = arrivals;
    const QueueUpdate q = queue_update(s.backlog, a.beta, arrivals);
    next.backlog = q.next_backlog;
    out.dropped = q.dropped;

    const double e_l = comp_energy(s.backlog);
    out.epoch_delay = d_off + local_delay(s.backlog, q.queued) + d_tx;
    out.energy_spent = e_o + e_l;
    next.energy = s.energy + out.energy_spent;
    next.loc = (s.loc + 1) % cfg_.num_waypoints();
    next.epoch = s.epoch + 1;
    return out;
}

}  // namespace sagin
