#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sagin/agent.hpp"

namespace sagin {

/// Windowed training metrics stream (delimiter-separated text). One row per
/// completed window holding the moving averages of the last `window`
/// iterations plus the schedule values in force at the window's end.
class MetricsWriter {
public:
    MetricsWriter(std::ostream& os, int num_bs, int beta_max, int window = 100);

    static std::string header(int num_bs);

    void observe(const IterationRecord& rec);

private:
    std::ostream& os_;
    int num_bs_;
    int beta_max_;
    int window_;
    long in_window_ = 0;
    double delay_sum_ = 0.0;
    double energy_sum_ = 0.0;
    long cum_drops_ = 0;
    std::vector<long> action_counts_;
    IterationRecord last_;
};

/// Per-flight aggregates (one traversal of the trajectory loop).
struct FlightStats {
    int flight = 0;
    double mean_delay = 0.0;   // per-epoch mean over the flight
    double mean_energy = 0.0;  // per-epoch mean over the flight
    long dropped = 0;
};

void write_flights_csv(std::ostream& os, const std::vector<FlightStats>& flights);

void write_episodes_csv(std::ostream& os, const std::vector<EpisodeReport>& reports,
                        int num_bs);

/// Empirical CDF: sorted sample values with cumulative fractions (i+1)/n.
/// Throws std::invalid_argument on empty input.
std::pair<std::vector<double>, std::vector<double>> compute_cdf(
    std::vector<double> samples);

void write_cdf_csv(std::ostream& os, const std::vector<double>& values,
                   const std::vector<double>& fractions);

/// Machine-readable summary (JSON text) of an evaluation run: delay/energy
/// means and percentiles, the violation rate against the budget, and the
/// per-destination offload proportions.
std::string summarize_flights(const std::vector<FlightStats>& flights, double budget,
                              const std::vector<long>& action_counts);

/// Machine-readable summary of a training run's episode reports.
std::string summarize_training(const std::vector<EpisodeReport>& reports, double budget,
                               int tail_episodes = 10);

}  // namespace sagin
