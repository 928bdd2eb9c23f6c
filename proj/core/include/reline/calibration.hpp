#pragma once

#include <vector>

#include "reline/rollout.hpp"
#include "reline/stats.hpp"

namespace reline {

struct DistributionSummary {
    double mean = 0.0;
    double sd = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    size_t count = 0;
};

struct TimingDistribution {
    std::vector<double> samples;  // rT milliseconds, one per agent action

    DistributionSummary summary() const;
};

struct CalibrationResult {
    double t_b = 0.0;
    double delta = 0.0;
    double t = 0.0;  // t_b + delta
    DistributionSummary reference_summary;
    DistributionSummary warmup_summary;
    bool negative_delta_warning = false;
};

// Linearly interpolated quantile between order statistics (type 7).
double quantile_type7(std::vector<double> samples, double q);

// t_b = mean + 5 * sample sd. Needs at least two samples.
double base_threshold(const TimingDistribution& dist);

// delta = max(Q1_tr - Q1, Q3_tr - Q3); may be negative, passed through.
double training_delta(const TimingDistribution& warmup, const TimingDistribution& reference);

CalibrationResult calibrate(const TimingDistribution& reference, const TimingDistribution& warmup);

// Timings of fixed-policy rollouts; one sample per step.
TimingDistribution collect_timings(Environment& env, GameKind kind, const RewardConfig& rc,
                                   uint64_t master_seed, const char* purpose, int episodes,
                                   const Policy& policy);

TimingDistribution collect_reference(Environment& env, GameKind kind, const RewardConfig& rc,
                                     uint64_t master_seed, int episodes, const Policy& baseline_policy);

// Timings under training-load conditions with actions chosen by the trained
// baseline agent. For the built-in simulated-timing envs this matches the
// reference distribution, so delta comes out 0.
TimingDistribution warmup_phase(Environment& env, GameKind kind, const RewardConfig& rc,
                                uint64_t master_seed, int episodes, const Policy& baseline_policy);

struct StabilityResult {
    std::vector<std::vector<double>> timing_matrix;  // repeat x step
    double min_rho = 0.0;
    double median_rho = 0.0;
    double max_adjusted_p = 0.0;
    bool all_significant = false;  // after Holm at 0.05
};

// Replays the same action sequence `repeats` times and checks how stable the
// per-step timing profile is across repeats (pairwise Spearman + Holm).
StabilityResult stability_check(const std::vector<int>& actions, Environment& env, int repeats,
                                uint64_t master_seed);

}  // namespace reline
