#include "sagin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sagin {

double ComputeParams::f_of(int destination) const {
    if (destination == 0) return f_sat;
    return f_bs.at(static_cast<std::size_t>(destination - 1));
}

double RadioParams::noise_power(double bandwidth_hz) const {
    // dBm/Hz -> W/Hz -> W over the band
    return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0) * bandwidth_hz;
}

void RadioParams::set_sat_snr_db(double snr_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    sat_channel_gain = snr * noise_power(w_sat) / p_sat;
}

bool Waypoint::covers(int bs_index) const { return find(bs_index) != nullptr; }

const BsCoverage* Waypoint::find(int bs_index) const {
    for (const auto& c : bs) {
        if (c.bs == bs_index) return &c;
    }
    return nullptr;
}

void ScenarioConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("scenario: " + what);
    };
    require(task.phi > 0, "phi must be > 0");
    require(task.gamma > 0, "gamma must be > 0");
    require(std::isfinite(task.phi * task.gamma), "phi*gamma must be finite");
    require(compute.f_uav > 0 && compute.f_sat > 0, "capabilities must be > 0");
    for (double f : compute.f_bs) require(f > 0, "BS capability must be > 0");
    require(radio.w_sat > 0 && radio.w_bs > 0, "bandwidths must be > 0");
    require(radio.p_sat > 0 && radio.p_bs > 0, "transmit powers must be > 0");
    require(radio.sat_prop_delay >= 0, "propagation delay must be >= 0");
    require(radio.sat_channel_gain >= 0, "satellite channel gain must be >= 0");
    require(energy.kappa > 0, "kappa must be > 0");
    require(energy.budget > 0, "energy budget must be > 0");
    require(epoch_seconds > 0, "epoch length must be > 0");
    require(queue_size >= 1, "queue size must be >= 1");
    require(beta_max >= 1, "beta_max must be >= 1");
    require(drop_penalty >= 0, "drop penalty must be >= 0");
    require(arrivals.rate >= 0, "arrival rate must be >= 0");
    require(arrivals.truncation >= 0, "arrival truncation must be >= 0");
    require(!trajectory.waypoints.empty(), "trajectory must have waypoints");

    const int n = num_bs();
    const int w = num_waypoints();
    for (int i = 0; i < w; ++i) {
        const Waypoint& wp = trajectory.waypoints[i];
        for (const auto& c : wp.bs) {
            require(c.bs >= 1 && c.bs <= n, "BS index out of range");
            require(c.x_m > 0, "BS distance must be > 0");
            require(c.coverage_remaining >= 1, "coverage_remaining must be >= 1");
            // Coverage promised for K epochs must be honored by the next
            // waypoints of the loop.
            if (c.coverage_remaining > 1) {
                const Waypoint& next = trajectory.waypoints[(i + 1) % w];
                const BsCoverage* nc = next.find(c.bs);
                require(nc != nullptr && nc->coverage_remaining >= c.coverage_remaining - 1,
                        "coverage_remaining inconsistent along trajectory");
            }
        }
    }
}

namespace {

Waypoint make_waypoint(std::vector<BsCoverage> bs) {
    Waypoint wp;
    wp.bs = std::move(bs);
    return wp;
}

ScenarioConfig paper_scenario() {
    ScenarioConfig cfg;
    cfg.compute.f_bs.assign(5, 1e10);
    cfg.radio.set_sat_snr_db(15.0);
    cfg.arrivals.rate = 2.0;
    cfg.arrivals.truncation = 20;
    // Hand-authored 12-waypoint loop standing in for a traffic-sim route:
    // two coverage stretches per side of the loop, satellite-only gaps.
    cfg.trajectory.waypoints = {
        make_waypoint({{1, 120.0, 6.5, 3}}),
        make_waypoint({{1, 90.0, 8.0, 2}}),
        make_waypoint({{1, 140.0, 5.5, 1}, {2, 160.0, 5.0, 3}}),
        make_waypoint({{2, 110.0, 7.0, 2}}),
        make_waypoint({{2, 150.0, 5.2, 1}}),
        make_waypoint({}),
        make_waypoint({{3, 100.0, 7.5, 2}, {4, 170.0, 4.6, 4}}),
        make_waypoint({{3, 130.0, 6.0, 1}, {4, 140.0, 5.6, 3}}),
        make_waypoint({{4, 100.0, 7.4, 2}}),
        make_waypoint({{4, 150.0, 5.3, 1}, {5, 120.0, 6.4, 2}}),
        make_waypoint({{5, 100.0, 7.6, 1}}),
        make_waypoint({}),
    };
    return cfg;
}

ScenarioConfig desk_scenario() {
    // Two-BS loop tuned for fast experiments. The satellite link is in a
    // deep fade (0 dB effective SNR): usable as an overflow valve but slow
    // and power-hungry, so indiscriminate offloading pays in both delay and
    // energy while BS bursts stay cheap.
    ScenarioConfig cfg;
    cfg.task.phi = 4e7;
    cfg.task.gamma = 25.0;
    cfg.compute.f_bs.assign(2, 1e10);
    cfg.radio.p_sat = 2.0;
    cfg.radio.set_sat_snr_db(0.0);
    cfg.energy.budget = 1.0;
    cfg.queue_size = 4;
    cfg.beta_max = 5;
    cfg.arrivals.rate = 1.1;
    cfg.arrivals.truncation = 8;
    cfg.trajectory.waypoints = {
        make_waypoint({{1, 100.0, 7.5, 3}}),
        make_waypoint({{1, 90.0, 8.2, 2}}),
        make_waypoint({{1, 120.0, 6.6, 1}}),
        make_waypoint({}),
        make_waypoint({{2, 95.0, 7.9, 2}}),
        make_waypoint({{2, 110.0, 7.1, 1}}),
        make_waypoint({}),
        make_waypoint({}),
    };
    return cfg;
}

ScenarioConfig tiny_scenario() {
    // Sized so the exact tabular solver applies: the UAV cannot finish any
    // task locally (phi*gamma = 2 * f_uav * tau), so everything has to be
    // offloaded; a satellite offload spans two epochs and busts the per-epoch
    // energy budget, a BS offload fits both the epoch and the budget.
    ScenarioConfig cfg;
    cfg.task.phi = 2e6;
    cfg.task.gamma = 100.0;
    cfg.compute.f_bs.assign(1, 1e10);
    cfg.radio.set_sat_snr_db(15.0);
    cfg.energy.budget = 0.05;
    cfg.epoch_seconds = 0.1;
    cfg.queue_size = 3;
    cfg.beta_max = 1;
    cfg.drop_penalty = 0.5;
    cfg.arrivals.rate = 0.8;
    cfg.arrivals.truncation = 1;
    // One BS-covered waypoint per loop: the BS alone cannot absorb the
    // arrival stream, so a delay-optimal policy leans on the satellite while
    // a risk-averse one rations it.
    cfg.trajectory.waypoints = {
        make_waypoint({{1, 100.0, 5.74, 1}}),
        make_waypoint({}),
        make_waypoint({}),
    };
    return cfg;
}

}  // namespace

ScenarioConfig scenario_preset(const std::string& name) {
    ScenarioConfig cfg;
    if (name == "paper") {
        cfg = paper_scenario();
    } else if (name == "desk") {
        cfg = desk_scenario();
    } else if (name == "tiny") {
        cfg = tiny_scenario();
    } else {
        throw ConfigError("unknown scenario preset: " + name);
    }
    cfg.validate();
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("bad numeric value for '" + key + "': " + s);
}

int parse_int(const std::string& s, const std::string& key) {
    const double v = parse_double(s, key);
    const int i = static_cast<int>(std::llround(v));
    if (static_cast<double>(i) != v)
        throw ConfigError("expected integer for '" + key + "': " + s);
    return i;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(parse_double(tok, key));
    return out;
}

// waypoint = bs <n> x <m> theta <deg> cov <epochs> ; bs ...   (empty = sat only)
Waypoint parse_waypoint(const std::string& value, int lineno) {
    Waypoint wp;
    std::istringstream entries(value);
    std::string entry;
    while (std::getline(entries, entry, ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        std::istringstream iss(entry);
        BsCoverage cov;
        bool have_bs = false, have_x = false, have_theta = false, have_cov = false;
        std::string field, val;
        while (iss >> field >> val) {
            if (field == "bs") {
                cov.bs = parse_int(val, "bs");
                have_bs = true;
            } else if (field == "x") {
                cov.x_m = parse_double(val, "x");
                have_x = true;
            } else if (field == "theta") {
                cov.theta_deg = parse_double(val, "theta");
                have_theta = true;
            } else if (field == "cov") {
                cov.coverage_remaining = parse_int(val, "cov");
                have_cov = true;
            } else {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown waypoint field '" + field + "'");
            }
        }
        if (!(have_bs && have_x && have_theta && have_cov))
            throw ConfigError("line " + std::to_string(lineno) +
                              ": waypoint entry needs bs/x/theta/cov");
        wp.bs.push_back(cov);
    }
    return wp;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);

    ScenarioConfig cfg = scenario_preset("paper");
    cfg.trajectory.waypoints.clear();
    bool sat_gain_set = false;
    double sat_snr_db = 15.0;

    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section == "tasks") {
            if (key == "phi_bits") cfg.task.phi = parse_double(value, key);
            else if (key == "gamma_cycles_per_bit") cfg.task.gamma = parse_double(value, key);
            else if (key == "epoch_seconds") cfg.epoch_seconds = parse_double(value, key);
            else if (key == "queue_size") cfg.queue_size = parse_int(value, key);
            else if (key == "beta_max") cfg.beta_max = parse_int(value, key);
            else if (key == "drop_penalty_s") cfg.drop_penalty = parse_double(value, key);
            else throw ConfigError("unknown key in [tasks]: " + key);
        } else if (section == "compute") {
            if (key == "f_uav") cfg.compute.f_uav = parse_double(value, key);
            else if (key == "f_sat") cfg.compute.f_sat = parse_double(value, key);
            else if (key == "f_bs") cfg.compute.f_bs = parse_list(value, key);
            else throw ConfigError("unknown key in [compute]: " + key);
        } else if (section == "radio") {
            if (key == "w_sat_hz") cfg.radio.w_sat = parse_double(value, key);
            else if (key == "w_bs_hz") cfg.radio.w_bs = parse_double(value, key);
            else if (key == "p_sat_w") cfg.radio.p_sat = parse_double(value, key);
            else if (key == "p_bs_w") cfg.radio.p_bs = parse_double(value, key);
            else if (key == "noise_psd_dbm_hz") cfg.radio.noise_psd_dbm_hz = parse_double(value, key);
            else if (key == "sat_snr_db") sat_snr_db = parse_double(value, key);
            else if (key == "sat_channel_gain") {
                cfg.radio.sat_channel_gain = parse_double(value, key);
                sat_gain_set = true;
            } else if (key == "sat_prop_delay_s") cfg.radio.sat_prop_delay = parse_double(value, key);
            else if (key == "pathloss_coeffs") {
                const auto v = parse_list(value, key);
                if (v.size() != 5) throw ConfigError("pathloss_coeffs needs 5 values");
                cfg.radio.pathloss = {v[0], v[1], v[2], v[3], v[4]};
            } else throw ConfigError("unknown key in [radio]: " + key);
        } else if (section == "energy") {
            if (key == "kappa") cfg.energy.kappa = parse_double(value, key);
            else if (key == "budget_j") cfg.energy.budget = parse_double(value, key);
            else throw ConfigError("unknown key in [energy]: " + key);
        } else if (section == "arrivals") {
            if (key == "rate") cfg.arrivals.rate = parse_double(value, key);
            else if (key == "truncation") cfg.arrivals.truncation = parse_int(value, key);
            else throw ConfigError("unknown key in [arrivals]: " + key);
        } else if (section == "trajectory") {
            if (key == "waypoint") cfg.trajectory.waypoints.push_back(parse_waypoint(value, lineno));
            else throw ConfigError("unknown key in [trajectory]: " + key);
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside known section");
        }
    }

    // Highest BS index mentioned anywhere defines N when f_bs was not given
    // explicitly at matching length.
    int max_bs = 0;
    for (const auto& wp : cfg.trajectory.waypoints)
        for (const auto& c : wp.bs) max_bs = std::max(max_bs, c.bs);
    if (max_bs > cfg.num_bs())
        throw ConfigError("trajectory references BS " + std::to_string(max_bs) +
                          " but [compute] f_bs lists only " + std::to_string(cfg.num_bs()));

    if (!sat_gain_set) cfg.radio.set_sat_snr_db(sat_snr_db);
    cfg.validate();
    return cfg;
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
    if (name_or_path == "paper" || name_or_path == "desk" || name_or_path == "tiny")
        return scenario_preset(name_or_path);
    return load_scenario(name_or_path);
}

namespace {

std::string canonical_text(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "[tasks]\n"
       << "phi_bits = " << cfg.task.phi << "\n"
       << "gamma_cycles_per_bit = " << cfg.task.gamma << "\n"
       << "epoch_seconds = " << cfg.epoch_seconds << "\n"
       << "queue_size = " << cfg.queue_size << "\n"
       << "beta_max = " << cfg.beta_max << "\n"
       << "drop_penalty_s = " << cfg.drop_penalty << "\n\n"
       << "[compute]\n"
       << "f_uav = " << cfg.compute.f_uav << "\n"
       << "f_sat = " << cfg.compute.f_sat << "\n"
       << "f_bs =";
    for (double f : cfg.compute.f_bs) os << " " << f;
    os << "\n\n[radio]\n"
       << "w_sat_hz = " << cfg.radio.w_sat << "\n"
       << "w_bs_hz = " << cfg.radio.w_bs << "\n"
       << "p_sat_w = " << cfg.radio.p_sat << "\n"
       << "p_bs_w = " << cfg.radio.p_bs << "\n"
       << "noise_psd_dbm_hz = " << cfg.radio.noise_psd_dbm_hz << "\n"
       << "sat_channel_gain = " << cfg.radio.sat_channel_gain << "\n"
       << "sat_prop_delay_s = " << cfg.radio.sat_prop_delay << "\n"
       << "pathloss_coeffs = " << cfg.radio.pathloss.a0 << " " << cfg.radio.pathloss.theta0
       << " " << cfg.radio.pathloss.b0 << " " << cfg.radio.pathloss.c0 << " "
       << cfg.radio.pathloss.eta0 << "\n\n"
       << "[energy]\n"
       << "kappa = " << cfg.energy.kappa << "\n"
       << "budget_j = " << cfg.energy.budget << "\n\n"
       << "[arrivals]\n"
       << "rate = " << cfg.arrivals.rate << "\n"
       << "truncation = " << cfg.arrivals.truncation << "\n\n"
       << "[trajectory]\n";
    for (const auto& wp : cfg.trajectory.waypoints) {
        os << "waypoint =";
        for (std::size_t i = 0; i < wp.bs.size(); ++i) {
            const auto& c = wp.bs[i];
            os << " bs " << c.bs << " x " << c.x_m << " theta " << c.theta_deg
               << " cov " << c.coverage_remaining;
            if (i + 1 < wp.bs.size()) os << " ;";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write scenario file: " + path);
    out << canonical_text(cfg);
}

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
    const std::string text = canonical_text(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace sagin
