#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sagin/baselines.hpp"
#include "test_util.hpp"

using namespace sagin;
using testutil::all_bs;

TEST_CASE("RPC picks uniformly over the allowed set") {
    const ScenarioConfig cfg = all_bs();
    const Env env(cfg);
    const ActionSpace space(cfg.num_bs(), cfg.beta_max);
    SUBCASE("all 43 actions allowed: multinomial within 3 sigma") {
        EnvState s = env.initial_state();
        s.backlog = 10;  // deep enough for beta up to 7 anywhere
        const ActionMask mask = compute_mask(env, space, s);
        REQUIRE(mask.allowed_count == 43);
        Rng rng(2024);
        std::vector<long> counts(static_cast<std::size_t>(space.size()), 0);
        const long n = 1000000;
        for (long i = 0; i < n; ++i)
            ++counts[static_cast<std::size_t>(rpc_policy(mask, rng))];
        const double p = 1.0 / 43.0;
        const double sigma = std::sqrt(n * p * (1.0 - p));
        for (long c : counts) CHECK(std::abs(c - n * p) <= 3.0 * sigma);
    }
    SUBCASE("a busy interface forces the idle action") {
        EnvState s = env.initial_state();
        s.fwd_bits = 1.0;
        s.fwd_rate = 1.0;
        s.backlog = 5;
        const ActionMask mask = compute_mask(env, space, s);
        Rng rng(1);
        for (int i = 0; i < 300; ++i) CHECK(rpc_policy(mask, rng) == 0);
    }
    SUBCASE("never emits a masked action") {
        Rng rng(4), roll(5);
        EnvState s = env.initial_state();
        for (int t = 0; t < 5000; ++t) {
            const ActionMask mask = compute_mask(env, space, s);
            const int a = rpc_policy(mask, rng);
            CHECK(mask.is_allowed(a));
            s = env.step(s, space.action(a), roll).next;
        }
    }
}

TEST_CASE("SPC table construction") {
    const ScenarioConfig cfg = scenario_preset("desk");
    const Env env(cfg);
    const ActionSpace space(cfg.num_bs(), cfg.beta_max);
    const SpcTable table = make_spc_table(env, space, 0.3);
    SUBCASE("one distribution per coverage class, each summing to 1") {
        CHECK(table.class_distributions.size() == 3);  // {}, {1}, {2}
        for (const auto& [sig, dist] : table.class_distributions) {
            double total = 0.0;
            for (double v : dist) total += v;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(dist[0] == doctest::Approx(0.7).epsilon(1e-12));
        }
    }
    SUBCASE("table is tagged with the scenario hash") {
        CHECK(table.scenario == scenario_hash(cfg));
    }
}

TEST_CASE("SPC calibration") {
    const ScenarioConfig cfg = scenario_preset("desk");
    const Env env(cfg);
    const ActionSpace space(cfg.num_bs(), cfg.beta_max);
    SUBCASE("unbounded budget keeps every offload") {
        Rng rng(9);
        const SpcTable table = spc_calibrate(env, space, 1e12, 50, rng);
        CHECK(table.intensity == 1.0);
    }
    SUBCASE("impossible budget raises calibration-infeasible") {
        Rng rng(9);
        CHECK_THROWS_AS(spc_calibrate(env, space, 1e-12, 50, rng), CalibrationInfeasible);
    }
    SUBCASE("achieved energy respects the budget on fresh rollouts") {
        Rng rng(99);
        const SpcTable table = spc_calibrate(env, space, cfg.energy.budget, 2000, rng);
        CHECK(table.achieved_energy <= cfg.energy.budget);
        CHECK(table.intensity > 0.0);
        // measure over 1000 fresh flights
        Rng fresh(123456);
        EnvState s = env.initial_state();
        double energy = 0.0;
        const long epochs = 1000L * cfg.num_waypoints();
        for (long t = 0; t < epochs; ++t) {
            const ActionMask mask = compute_mask(env, space, s);
            const int a = spc_policy(table, env, space, s, mask, fresh);
            const StepOutcome out = env.step(s, space.action(a), fresh);
            energy += out.energy_spent;
            s = out.next;
        }
        CHECK(energy / static_cast<double>(epochs) <= cfg.energy.budget * 1.05);
    }
    SUBCASE("needs at least one sample flight") {
        Rng rng(9);
        CHECK_THROWS_AS(spc_calibrate(env, space, 1.0, 0, rng), std::invalid_argument);
    }
}

TEST_CASE("SPC policy sampling") {
    const ScenarioConfig cfg = scenario_preset("desk");
    const Env env(cfg);
    const ActionSpace space(cfg.num_bs(), cfg.beta_max);
    const SpcTable table = make_spc_table(env, space, 0.5);
    SUBCASE("mask restriction: only idle possible means idle") {
        EnvState s = env.initial_state();  // empty queue
        const ActionMask mask = compute_mask(env, space, s);
        Rng rng(3);
        for (int i = 0; i < 200; ++i) CHECK(spc_policy(table, env, space, s, mask, rng) == 0);
    }
    SUBCASE("never emits a masked action, distribution is stationary") {
        Rng rng(6), roll(7);
        EnvState s = env.initial_state();
        for (int t = 0; t < 5000; ++t) {
            const ActionMask mask = compute_mask(env, space, s);
            const int a = spc_policy(table, env, space, s, mask, rng);
            CHECK(mask.is_allowed(a));
            s = env.step(s, space.action(a), roll).next;
        }
    }
    SUBCASE("round-trips through the text format") {
        std::stringstream ss;
        save_spc(ss, table);
        const SpcTable back = load_spc(ss);
        CHECK(back.intensity == table.intensity);
        CHECK(back.beta_max == table.beta_max);
        CHECK(back.scenario == table.scenario);
        CHECK(back.class_distributions == table.class_distributions);
    }
}

TEST_CASE("RPC busts the budget on the desk scenario while SPC holds it") {
    const ScenarioConfig cfg = scenario_preset("desk");
    const Env env(cfg);
    const ActionSpace space(cfg.num_bs(), cfg.beta_max);
    auto mean_energy = [&](auto policy, std::uint64_t seed) {
        Rng rng(seed);
        EnvState s = env.initial_state();
        double energy = 0.0;
        const long epochs = 20000;
        for (long t = 0; t < epochs; ++t) {
            const ActionMask mask = compute_mask(env, space, s);
            const int a = policy(s, mask, rng);
            const StepOutcome out = env.step(s, space.action(a), rng);
            energy += out.energy_spent;
            s = out.next;
        }
        return energy / static_cast<double>(epochs);
    };
    const double rpc_energy = mean_energy(
        [&](const EnvState&, const ActionMask& m, Rng& r) { return rpc_policy(m, r); }, 17);
    CHECK(rpc_energy > cfg.energy.budget);

    Rng crng(18);
    const SpcTable table = spc_calibrate(env, space, cfg.energy.budget, 2000, crng);
    const double spc_energy = mean_energy(
        [&](const EnvState& s, const ActionMask& m, Rng& r) {
            return spc_policy(table, env, space, s, m, r);
        },
        19);
    CHECK(spc_energy <= cfg.energy.budget * 1.05);
}
