#include "sagin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sagin {

MetricsWriter::MetricsWriter(std::ostream& os, int num_bs, int beta_max, int window)
    : os_(os), num_bs_(num_bs), beta_max_(beta_max), window_(window) {
    action_counts_.assign(static_cast<std::size_t>(num_bs) + 2, 0);
    os_ << header(num_bs) << '\n';
    os_ << std::setprecision(12);
}

std::string MetricsWriter::header(int num_bs) {
    std::ostringstream h;
    h << "episode,iteration,delay_ma,energy_ma,cum_drops,delta,greedy_prob,act_idle,act_sat";
    for (int n = 1; n <= num_bs; ++n) h << ",act_bs" << n;
    return h.str();
}

void MetricsWriter::observe(const IterationRecord& rec) {
    delay_sum_ += rec.delay;
    energy_sum_ += rec.energy_spent;
    cum_drops_ += rec.dropped;
    last_ = rec;
    ++in_window_;

    // Recover the destination bucket from the enumeration order: index 0 is
    // idle, then beta_max entries per destination (satellite, BS 1..N).
    if (rec.action == 0) {
        ++action_counts_[0];
    } else {
        ++action_counts_[static_cast<std::size_t>(1 + (rec.action - 1) / beta_max_)];
    }

    if (in_window_ < window_) return;
    os_ << last_.episode << ',' << last_.iteration << ','
        << delay_sum_ / static_cast<double>(window_) << ','
        << energy_sum_ / static_cast<double>(window_) << ',' << cum_drops_ << ','
        << last_.delta << ',' << last_.greedy_prob;
    for (long c : action_counts_) os_ << ',' << c;
    os_ << '\n';
    in_window_ = 0;
    delay_sum_ = 0.0;
    energy_sum_ = 0.0;
    std::fill(action_counts_.begin(), action_counts_.end(), 0);
}

void write_flights_csv(std::ostream& os, const std::vector<FlightStats>& flights) {
    os << "flight,mean_delay,mean_energy,dropped\n";
    os << std::setprecision(12);
    for (const auto& f : flights)
        os << f.flight << ',' << f.mean_delay << ',' << f.mean_energy << ','
           << f.dropped << '\n';
}

void write_episodes_csv(std::ostream& os, const std::vector<EpisodeReport>& reports,
                        int num_bs) {
    os << "episode,avg_delay,avg_energy,dropped,delta,final_greedy_prob,"
          "avg_cost_loss,avg_risk_loss,gradient_steps,act_idle,act_sat";
    for (int n = 1; n <= num_bs; ++n) os << ",act_bs" << n;
    os << '\n' << std::setprecision(12);
    for (const auto& r : reports) {
        os << r.episode << ',' << r.avg_delay << ',' << r.avg_energy << ','
           << r.dropped << ',' << r.delta << ',' << r.final_greedy_prob << ','
           << r.avg_cost_loss << ',' << r.avg_risk_loss << ',' << r.gradient_steps;
        for (long c : r.action_counts) os << ',' << c;
        os << '\n';
    }
}

std::pair<std::vector<double>, std::vector<double>> compute_cdf(
    std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("compute_cdf: empty sample set");
    std::stable_sort(samples.begin(), samples.end());
    std::vector<double> fractions(samples.size());
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        fractions[i] = static_cast<double>(i + 1) / n;
    return {std::move(samples), std::move(fractions)};
}

void write_cdf_csv(std::ostream& os, const std::vector<double>& values,
                   const std::vector<double>& fractions) {
    os << "value,fraction\n";
    os << std::setprecision(12);
    for (std::size_t i = 0; i < values.size(); ++i)
        os << values[i] << ',' << fractions[i] << '\n';
}

namespace {

double percentile(std::vector<double> sorted, double p) {
    // nearest-rank on an already sorted vector
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

nlohmann::json stats_block(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    return {{"mean", mean},
            {"p50", percentile(values, 0.50)},
            {"p90", percentile(values, 0.90)},
            {"p95", percentile(values, 0.95)},
            {"max", values.back()}};
}

}  // namespace

std::string summarize_flights(const std::vector<FlightStats>& flights, double budget,
                              const std::vector<long>& action_counts) {
    if (flights.empty()) throw std::invalid_argument("summarize_flights: no flights");
    std::vector<double> delays, energies;
    long drops = 0;
    long violations = 0;
    for (const auto& f : flights) {
        delays.push_back(f.mean_delay);
        energies.push_back(f.mean_energy);
        drops += f.dropped;
        if (f.mean_energy > budget) ++violations;
    }
    nlohmann::json j;
    j["flights"] = flights.size();
    j["budget"] = budget;
    j["delay"] = stats_block(delays);
    j["energy"] = stats_block(energies);
    j["violation_rate"] =
        static_cast<double>(violations) / static_cast<double>(flights.size());
    j["dropped_total"] = drops;
    long total_actions = 0;
    for (long c : action_counts) total_actions += c;
    nlohmann::json proportions = nlohmann::json::array();
    for (long c : action_counts)
        proportions.push_back(total_actions > 0
                                  ? static_cast<double>(c) / static_cast<double>(total_actions)
                                  : 0.0);
    j["offload_proportions"] = proportions;  // idle, satellite, BS 1..N
    return j.dump(2);
}

std::string summarize_training(const std::vector<EpisodeReport>& reports, double budget,
                               int tail_episodes) {
    if (reports.empty()) throw std::invalid_argument("summarize_training: no episodes");
    auto mean_over = [&](auto accessor, std::size_t from) {
        double sum = 0.0;
        for (std::size_t i = from; i < reports.size(); ++i) sum += accessor(reports[i]);
        return sum / static_cast<double>(reports.size() - from);
    };
    const std::size_t tail_from =
        reports.size() > static_cast<std::size_t>(tail_episodes)
            ? reports.size() - static_cast<std::size_t>(tail_episodes)
            : 0;
    long drops = 0;
    for (const auto& r : reports) drops += r.dropped;

    nlohmann::json j;
    j["episodes"] = reports.size();
    j["budget"] = budget;
    j["mean_delay"] = mean_over([](const EpisodeReport& r) { return r.avg_delay; }, 0);
    j["mean_energy"] = mean_over([](const EpisodeReport& r) { return r.avg_energy; }, 0);
    j["tail_mean_delay"] =
        mean_over([](const EpisodeReport& r) { return r.avg_delay; }, tail_from);
    j["tail_mean_energy"] =
        mean_over([](const EpisodeReport& r) { return r.avg_energy; }, tail_from);
    j["tail_episodes"] = reports.size() - tail_from;
    j["final_delta"] = reports.back().delta;
    j["dropped_total"] = drops;
    return j.dump(2);
}

}  // namespace sagin
