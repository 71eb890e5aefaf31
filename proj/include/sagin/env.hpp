#pragma once

#include <stdexcept>

#include "sagin/rng.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

/// Thrown when step() receives an action the mask would reject. Actions are
/// never silently corrected.
struct InvalidAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Offload target not available at the current waypoint.
struct UnavailableDestination : InvalidAction {
    using InvalidAction::InvalidAction;
};

/// Scheduling decision: destination alpha (-1 none, 0 satellite, 1..N BS)
/// and number of offloaded tasks beta. alpha == -1 iff beta == 0.
struct Action {
    static constexpr int kNone = -1;
    static constexpr int kSatellite = 0;

    int alpha = kNone;
    int beta = 0;

    bool offloads() const { return beta > 0; }
    friend bool operator==(const Action&, const Action&) = default;
};

struct EnvState {
    int loc = 0;            // waypoint index
    double fwd_bits = 0.0;  // bits waiting in the forwarding queue
    double fwd_rate = 0.0;  // drain rate bound to that content, bits/s
    int backlog = 0;        // computing-queue tasks, H
    double energy = 0.0;    // cumulative J since accounting reset, E
    long epoch = 0;         // t

    /// F flag: the communication interface is still busy forwarding.
    bool forwarding_busy() const { return fwd_bits > 0.0; }

    friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct StepOutcome {
    EnvState next;
    double epoch_delay = 0.0;   // D, seconds
    int dropped = 0;
    double energy_spent = 0.0;  // e_o + e_l, J
    int arrivals = 0;           // M actually drawn
};

/// Free-space-to-urban pathloss in dB as a function of distance and
/// elevation angle. Throws std::domain_error for non-positive distance.
double bs_pathloss(const PathlossCoeffs& c, double x_m, double theta_deg);

/// Epoch-based simulator of the UAV forwarding/computing queues, links, and
/// energy. Holds configuration only; all mutable state lives in EnvState, so
/// one Env can serve any number of independent rollouts.
class Env {
public:
    explicit Env(ScenarioConfig cfg);

    const ScenarioConfig& config() const { return cfg_; }
    EnvState initial_state() const { return EnvState{}; }

    double sat_rate() const;
    double bs_rate(int loc, int n) const;
    double link_rate(int loc, int alpha) const;

    /// Tasks the UAV itself can finish in one epoch.
    int local_capacity() const;

    double offload_compute_delay(int alpha, int beta) const;
    double local_delay(int backlog, int queued) const;
    double tx_delay(int loc, int alpha, int beta) const;
    double comm_energy(int loc, int alpha, int beta) const;
    double comp_energy(int backlog) const;

    struct QueueUpdate {
        int queued = 0;        // O
        int next_backlog = 0;  // H'
        int dropped = 0;
    };
    QueueUpdate queue_update(int backlog, int beta, int arrivals) const;

    /// Largest beta <= beta_max whose transmission fits in BS n's remaining
    /// coverage, accumulating per-epoch capacity along the trajectory.
    int feasible_beta_max(int loc, int n) const;

    int sample_arrivals(Rng& rng) const;

    /// Throws InvalidAction (or UnavailableDestination) when the action
    /// violates the scheduling constraints at this state.
    void validate_action(const EnvState& s, Action a) const;

    StepOutcome step(const EnvState& s, Action a, Rng& rng) const;

    /// Deterministic transition for a known arrival count; step() is this
    /// with arrivals drawn from the truncated Poisson.
    StepOutcome step_with_arrivals(const EnvState& s, Action a, int arrivals) const;

private:
    const Waypoint& waypoint(int loc) const;

    ScenarioConfig cfg_;
};

}  // namespace sagin
