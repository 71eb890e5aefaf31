#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sagin/agent.hpp"

namespace sagin {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kCalibrationInfeasible = 3,
    kTrainingDiverged = 4,
};

struct ExperimentSpec {
    std::string mode = "train";  // train | evaluate | baseline | oracle-check | sweep
    std::string scenario = "paper";
    std::string baseline_kind = "rpc";  // rpc | spc
    std::uint64_t seed = 1;
    double budget_override = -1.0;  // <= 0 keeps the scenario's budget
    std::string out_dir = "out";
    int replicas = 1;
    int flights = 1000;
    int spc_samples = 1000;
    std::string checkpoint;          // evaluate: trained agent to load
    std::vector<double> delta_grid;  // sweep; empty means 0, 0.5, ..., 10
    AgentConfig agent;
};

/// Derived, pairwise-distinct per-replica seed.
std::uint64_t replica_seed(std::uint64_t master, int replica);

/// Runs one experiment mode end to end, writing metrics under out_dir.
/// Returns an ExitCode value; errors are reported on stderr.
int run_experiment(const ExperimentSpec& spec);

}  // namespace sagin
