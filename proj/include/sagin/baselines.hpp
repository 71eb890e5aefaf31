#pragma once

#include <iosfwd>
#include <map>

#include "sagin/env.hpp"
#include "sagin/mdp.hpp"
#include "sagin/rng.hpp"

namespace sagin {

/// Even never offloading busts the energy budget on this scenario.
struct CalibrationInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Random probabilistic configuration: uniform over the allowed actions.
int rpc_policy(const ActionMask& mask, Rng& rng);

/// Sampling-based probabilistic configuration. States are classed by the
/// forwarding flag and the waypoint's coverage set; each class carries a
/// frozen distribution over the enumerated actions, parameterized by one
/// offload intensity p found by grid search against the energy budget.
struct SpcTable {
    double intensity = 0.0;  // calibrated offload probability p
    int beta_max = 0;
    // Distribution per coverage signature (ascending covering-BS indices)
    // for F = 0; with F = 1 only idling is possible.
    std::map<std::vector<int>, std::vector<double>> class_distributions;
    long samples_used = 0;
    double achieved_energy = 0.0;  // mean per-epoch J measured at calibration
    std::uint64_t scenario = 0;    // scenario_hash of the calibration scenario
};

/// Builds the frozen per-class distributions for a given intensity.
SpcTable make_spc_table(const Env& env, const ActionSpace& space, double intensity);

/// Grid-searches the offload intensity (step 0.01, descending) and returns
/// the largest one whose measured mean per-epoch energy stays within the
/// budget over num_samples flights. Throws CalibrationInfeasible when even
/// p = 0 violates.
SpcTable spc_calibrate(const Env& env, const ActionSpace& space, double budget,
                       int num_samples, Rng& rng, double grid_step = 0.01);

/// Samples from the class distribution restricted to the current mask.
int spc_policy(const SpcTable& table, const Env& env, const ActionSpace& space,
               const EnvState& s, const ActionMask& mask, Rng& rng);

void save_spc(std::ostream& os, const SpcTable& table);
SpcTable load_spc(std::istream& is);

}  // namespace sagin
