#include "sagin/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "sagin/scenario.hpp"

namespace sagin {

int rpc_policy(const ActionMask& mask, Rng& rng) {
    std::uint64_t pick = rng.uniform_int(static_cast<std::uint64_t>(mask.allowed_count));
    for (std::size_t i = 0; i < mask.allowed.size(); ++i) {
        if (mask.allowed[i] == 0) continue;
        if (pick == 0) return static_cast<int>(i);
        --pick;
    }
    throw std::logic_error("mask invariant broken: no allowed action");
}

namespace {

std::vector<int> coverage_signature(const Waypoint& wp) {
    std::vector<int> sig;
    sig.reserve(wp.bs.size());
    for (const auto& c : wp.bs) sig.push_back(c.bs);
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

}  // namespace

SpcTable make_spc_table(const Env& env, const ActionSpace& space, double intensity) {
    SpcTable table;
    table.intensity = intensity;
    table.beta_max = env.config().beta_max;
    table.scenario = scenario_hash(env.config());
    for (const auto& wp : env.config().trajectory.waypoints) {
        std::vector<int> sig = coverage_signature(wp);
        if (table.class_distributions.count(sig)) continue;
        // Destinations: satellite plus the covering BSs; intensity is split
        // uniformly across destinations, then across 1..beta_max.
        std::vector<int> destinations = {Action::kSatellite};
        for (int bs : sig) destinations.push_back(bs);
        std::vector<double> dist(static_cast<std::size_t>(space.size()), 0.0);
        dist[0] = 1.0 - intensity;
        const double per_action =
            intensity / (static_cast<double>(destinations.size()) * table.beta_max);
        for (int d : destinations)
            for (int beta = 1; beta <= table.beta_max; ++beta)
                dist[static_cast<std::size_t>(space.index_of(Action{d, beta}))] = per_action;
        table.class_distributions.emplace(std::move(sig), std::move(dist));
    }
    return table;
}

int spc_policy(const SpcTable& table, const Env& env, const ActionSpace& space,
               const EnvState& s, const ActionMask& mask, Rng& rng) {
    if (s.forwarding_busy()) return 0;  // only (-1, 0) is possible
    const auto& wp =
        env.config().trajectory.waypoints[static_cast<std::size_t>(s.loc)];
    const auto it = table.class_distributions.find(coverage_signature(wp));
    if (it == table.class_distributions.end())
        throw std::runtime_error("SPC table does not cover this waypoint class");
    const std::vector<double>& dist = it->second;

    double total = 0.0;
    for (int i = 0; i < space.size(); ++i)
        if (mask.is_allowed(i)) total += dist[static_cast<std::size_t>(i)];
    if (total <= 0.0) return 0;

    const double u = rng.u01() * total;
    double cum = 0.0;
    int last_allowed = 0;
    for (int i = 0; i < space.size(); ++i) {
        if (!mask.is_allowed(i)) continue;
        last_allowed = i;
        cum += dist[static_cast<std::size_t>(i)];
        if (u < cum) return i;
    }
    return last_allowed;
}

namespace {

/// Mean per-epoch energy of the table's policy over a number of flights,
/// after a short burn-in to fill the queues.
double measure_energy(const Env& env, const ActionSpace& space, const SpcTable& table,
                      int num_flights, Rng& rng) {
    const int wp_count = env.config().num_waypoints();
    const long burn_in = 5L * wp_count;
    const long measured = static_cast<long>(num_flights) * wp_count;
    EnvState s = env.initial_state();
    double energy = 0.0;
    for (long t = 0; t < burn_in + measured; ++t) {
        const ActionMask mask = compute_mask(env, space, s);
        const int a = spc_policy(table, env, space, s, mask, rng);
        const StepOutcome out = env.step(s, space.action(a), rng);
        if (t >= burn_in) energy += out.energy_spent;
        s = out.next;
    }
    return energy / static_cast<double>(measured);
}

}  // namespace

SpcTable spc_calibrate(const Env& env, const ActionSpace& space, double budget,
                       int num_samples, Rng& rng, double grid_step) {
    if (num_samples < 1)
        throw std::invalid_argument("spc_calibrate: need at least one sample flight");
    const int steps = static_cast<int>(std::round(1.0 / grid_step));
    for (int k = steps; k >= 0; --k) {
        const double p = static_cast<double>(k) * grid_step;
        SpcTable table = make_spc_table(env, space, p);
        const double energy = measure_energy(env, space, table, num_samples, rng);
        if (energy <= budget) {
            table.samples_used = static_cast<long>(num_samples) * env.config().num_waypoints();
            table.achieved_energy = energy;
            return table;
        }
    }
    throw CalibrationInfeasible(
        "SPC calibration infeasible: even p = 0 exceeds the energy budget");
}

void save_spc(std::ostream& os, const SpcTable& table) {
    os.precision(17);
    os << "spc-table 1\n";
    os << table.intensity << ' ' << table.beta_max << ' ' << table.samples_used << ' '
       << table.achieved_energy << ' ' << table.scenario << '\n';
    os << table.class_distributions.size() << '\n';
    for (const auto& [sig, dist] : table.class_distributions) {
        os << sig.size();
        for (int b : sig) os << ' ' << b;
        os << '\n' << dist.size();
        for (double v : dist) os << ' ' << v;
        os << '\n';
    }
}

SpcTable load_spc(std::istream& is) {
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "spc-table" || version != 1)
        throw std::runtime_error("bad SPC table header");
    SpcTable table;
    std::size_t classes = 0;
    is >> table.intensity >> table.beta_max >> table.samples_used >>
        table.achieved_energy >> table.scenario >> classes;
    for (std::size_t c = 0; c < classes; ++c) {
        std::size_t n = 0;
        is >> n;
        std::vector<int> sig(n);
        for (auto& b : sig) is >> b;
        is >> n;
        std::vector<double> dist(n);
        for (auto& v : dist) is >> v;
        table.class_distributions.emplace(std::move(sig), std::move(dist));
    }
    if (!is) throw std::runtime_error("truncated SPC table");
    return table;
}

}  // namespace sagin
