#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "reline/calibration.hpp"
#include "reline/racesim.hpp"
#include "reline/random_agent.hpp"

using namespace reline;

namespace {

// straight-line restatement of the linear-interpolation quantile
double quantile_oracle(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * (static_cast<double>(v.size()) - 1.0);
    size_t i = static_cast<size_t>(pos);
    double frac = pos - static_cast<double>(i);
    if (i + 1 >= v.size()) return v.back();
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

}  // namespace

TEST_CASE("quantiles: fixtures and randomized oracle comparison") {
    std::vector<double> five = {1, 2, 3, 4, 5};
    CHECK(quantile_type7(five, 0.25) == doctest::Approx(2.0));
    CHECK(quantile_type7(five, 0.75) == doctest::Approx(4.0));
    CHECK(quantile_type7(five, 0.0) == 1.0);
    CHECK(quantile_type7(five, 1.0) == 5.0);
    CHECK(quantile_type7(five, 0.5) == 3.0);

    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(static_cast<size_t>(uniform_int(rng, 1, 30)));
        for (auto& x : v) x = gaussian(rng, 0.0, 4.0);
        for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            CHECK(quantile_type7(v, q) == doctest::Approx(quantile_oracle(v, q)).epsilon(1e-12));
        }
    }
}

TEST_CASE("base threshold: five-sigma rule with hand oracles") {
    TimingDistribution constant{{4.2, 4.2, 4.2, 4.2}};
    CHECK(base_threshold(constant) == doctest::Approx(4.2));  // sd = 0

    TimingDistribution five{{1, 2, 3, 4, 5}};
    CHECK(base_threshold(five) == doctest::Approx(3.0 + 5.0 * std::sqrt(2.5)));

    TimingDistribution shifted{{1 + 7.0, 2 + 7.0, 3 + 7.0, 4 + 7.0, 5 + 7.0}};
    CHECK(base_threshold(shifted) == doctest::Approx(base_threshold(five) + 7.0));

    CHECK_THROWS_AS(base_threshold(TimingDistribution{{1.0}}), std::invalid_argument);
}

TEST_CASE("training delta: identical, translated, and tail-only-shift inputs") {
    TimingDistribution ref{{10, 11, 12, 13, 14, 15, 16, 17, 18}};
    CHECK(training_delta(ref, ref) == 0.0);

    TimingDistribution plus2{{12, 13, 14, 15, 16, 17, 18, 19, 20}};
    CHECK(training_delta(plus2, ref) == doctest::Approx(2.0));

    // only the top third inflated: Q1 unchanged, Q3 moves by 6
    TimingDistribution tail{{10, 11, 12, 13, 14, 15, 22, 23, 24}};
    CHECK(quantile_type7(tail.samples, 0.25) == quantile_type7(ref.samples, 0.25));
    CHECK(training_delta(tail, ref) == doctest::Approx(quantile_type7(tail.samples, 0.75) -
                                                       quantile_type7(ref.samples, 0.75)));

    // warmup faster than reference: delta goes negative but is passed through
    TimingDistribution faster{{8, 9, 10, 11, 12, 13, 14, 15, 16}};
    auto result = calibrate(ref, faster);
    CHECK(result.delta == doctest::Approx(-2.0));
    CHECK(result.negative_delta_warning);
    CHECK(result.t == doctest::Approx(result.t_b - 2.0));
}

TEST_CASE("calibrate composes t = t_b + delta") {
    TimingDistribution ref{{1, 2, 3, 4, 5}};
    TimingDistribution warm{{3, 4, 5, 6, 7}};
    auto r = calibrate(ref, warm);
    CHECK(r.t_b == doctest::Approx(3.0 + 5.0 * std::sqrt(2.5)));
    CHECK(r.delta == doctest::Approx(2.0));
    CHECK(r.t == doctest::Approx(r.t_b + 2.0));
    CHECK(r.reference_summary.count == 5);
    CHECK_FALSE(r.negative_delta_warning);
}

TEST_CASE("timing collection: determinism, sample counting, and validation") {
    RaceSimConfig cfg;
    cfg.cost_field.base_cost_ms = 10.0;
    cfg.cost_field.noise_stddev_ms = 0.5;
    cfg.max_episode_steps = 50;
    cfg.stuck_steps = 30;
    RaceSimEnv env(cfg);
    RewardConfig rc;
    Policy throttle = [](const GameObservation&) { return 2; };

    auto a = collect_reference(env, GameKind::Race, rc, 5, 3, throttle);
    auto b = collect_reference(env, GameKind::Race, rc, 5, 3, throttle);
    CHECK(a.samples == b.samples);
    CHECK(a.samples.size() == 150);  // 3 episodes x 50 steps, none finish in 50

    // simulated timing is load-independent, so warmup equals reference shape
    auto warm = warmup_phase(env, GameKind::Race, rc, 5, 3, throttle);
    auto r = calibrate(a, warm);
    CHECK(r.delta == doctest::Approx(0.0).epsilon(0.05));

    CHECK_THROWS_AS(collect_reference(env, GameKind::Race, rc, 5, 0, throttle), std::invalid_argument);
}

TEST_CASE("stability check over a noisy hotspot profile") {
    RaceSimConfig cfg;
    cfg.cost_field.base_cost_ms = 10.0;
    cfg.cost_field.hotspots = {{0.0, 20.0, 30.0, 4.0}, {0.0, 60.0, 25.0, 5.0}};
    cfg.cost_field.noise_stddev_ms = 0.3;
    RaceSimEnv env(cfg);
    std::vector<int> throttle(400, 2);

    auto res = stability_check(throttle, env, 5, 99);
    CHECK(res.timing_matrix.size() == 5);
    CHECK(res.timing_matrix[0].size() == 400);
    CHECK(res.min_rho > 0.9);
    CHECK(res.all_significant);

    // without noise every repeat records the identical profile
    cfg.cost_field.noise_stddev_ms = 0.0;
    RaceSimEnv clean(cfg);
    auto exact = stability_check(throttle, clean, 3, 99);
    CHECK(exact.min_rho == doctest::Approx(1.0));
    CHECK(exact.max_adjusted_p == 0.0);

    CHECK_THROWS_AS(stability_check({}, env, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(stability_check(throttle, env, 1, 1), std::invalid_argument);
}
