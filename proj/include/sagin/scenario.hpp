#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sagin {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One task class (phi, gamma): input size in bits and CPU cycles per bit.
struct TaskClass {
    double phi = 4e7;     // 5 MB, decimal convention (1 MB = 8e6 bits)
    double gamma = 25.0;  // cycles/bit, so phi*gamma = 1 Gcycle per task
};

struct ComputeParams {
    double f_uav = 1e9;            // cycles/s
    double f_sat = 5e9;            // cycles/s
    std::vector<double> f_bs;      // cycles/s, index 0 holds BS 1

    double f_of(int destination) const;  // destination 0 = satellite
};

struct PathlossCoeffs {
    double a0 = 3.04;
    double theta0 = -3.61;
    double b0 = -23.29;
    double c0 = 4.14;
    double eta0 = 20.7;
};

struct RadioParams {
    double w_sat = 2e6;                  // Hz
    double w_bs = 3e6;                   // Hz
    double p_sat = 5.0;                  // W
    double p_bs = 1.6;                   // W
    double noise_psd_dbm_hz = -174.0;
    double sat_channel_gain = 0.0;       // effective |h|^2, linear
    double sat_prop_delay = 6.44e-3;     // s
    PathlossCoeffs pathloss;

    /// Noise power in watts over a bandwidth, from the dBm/Hz density.
    double noise_power(double bandwidth_hz) const;

    /// Sets sat_channel_gain so the UAV-satellite SNR equals snr_db.
    void set_sat_snr_db(double snr_db);
};

struct EnergyParams {
    double kappa = 1e-28;   // effective switched capacitance
    double budget = 55.0;   // per-epoch time-averaged cap, J
};

/// Coverage of one BS at one waypoint. coverage_remaining counts the epochs
/// (including the current one) the UAV stays inside this BS's footprint.
struct BsCoverage {
    int bs = 0;                  // 1..N
    double x_m = 0.0;            // UAV-BS distance
    double theta_deg = 0.0;      // elevation angle
    int coverage_remaining = 1;  // K
};

struct Waypoint {
    std::vector<BsCoverage> bs;  // satellite (destination 0) always available

    bool covers(int bs_index) const;
    const BsCoverage* find(int bs_index) const;
};

/// Closed loop of waypoints; one traversal = one flight.
struct Trajectory {
    std::vector<Waypoint> waypoints;
};

struct ArrivalProcess {
    double rate = 2.0;    // mean arrivals per epoch
    int truncation = 20;  // max arrivals per epoch
};

struct ScenarioConfig {
    TaskClass task;
    ComputeParams compute;
    RadioParams radio;
    EnergyParams energy;
    Trajectory trajectory;
    ArrivalProcess arrivals;

    double epoch_seconds = 1.0;  // tau
    int queue_size = 20;         // rho
    int beta_max = 7;
    double drop_penalty = 10.0;  // lambda, seconds per dropped task

    int num_bs() const { return static_cast<int>(compute.f_bs.size()); }
    int num_waypoints() const {
        return static_cast<int>(trajectory.waypoints.size());
    }

    /// Throws ConfigError on any violated invariant (positivity, BS indices,
    /// coverage consistency along the loop).
    void validate() const;
};

/// Built-in scenarios: "paper" (Table-style constants, hand-authored loop),
/// "desk" (small 2-BS loop for fast experiments), "tiny" (3-waypoint
/// instance small enough for exact tabular solving).
ScenarioConfig scenario_preset(const std::string& name);

/// Loads a sectioned key-value scenario file. Unspecified keys keep the
/// paper-constant defaults. Validates before returning.
ScenarioConfig load_scenario(const std::string& path);

/// Resolves either a preset name or a file path.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

void save_scenario(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a over the canonical serialization; used to pair calibration
/// artifacts with the scenario they were produced on.
std::uint64_t scenario_hash(const ScenarioConfig& cfg);

}  // namespace sagin
