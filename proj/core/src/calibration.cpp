#include "reline/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reline/rng.hpp"

namespace reline {

double quantile_type7(std::vector<double> samples, double q) {
    if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(samples.begin(), samples.end());
    double h = (static_cast<double>(samples.size()) - 1.0) * q;
    size_t lo = static_cast<size_t>(std::floor(h));
    size_t hi = std::min(lo + 1, samples.size() - 1);
    return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

DistributionSummary TimingDistribution::summary() const {
    if (samples.empty()) throw std::invalid_argument("timing distribution: empty");
    DistributionSummary s;
    s.count = samples.size();
    auto d = stats::descriptive(samples);
    s.mean = d.mean;
    s.sd = d.stdev;
    s.q1 = quantile_type7(samples, 0.25);
    s.q3 = quantile_type7(samples, 0.75);
    return s;
}

double base_threshold(const TimingDistribution& dist) {
    if (dist.samples.size() < 2) throw std::invalid_argument("base_threshold: need at least 2 samples");
    auto d = stats::descriptive(dist.samples);
    return d.mean + 5.0 * d.stdev;
}

double training_delta(const TimingDistribution& warmup, const TimingDistribution& reference) {
    if (warmup.samples.empty() || reference.samples.empty())
        throw std::invalid_argument("training_delta: empty distribution");
    double q1_tr = quantile_type7(warmup.samples, 0.25);
    double q3_tr = quantile_type7(warmup.samples, 0.75);
    double q1 = quantile_type7(reference.samples, 0.25);
    double q3 = quantile_type7(reference.samples, 0.75);
    return std::max(q1_tr - q1, q3_tr - q3);
}

CalibrationResult calibrate(const TimingDistribution& reference, const TimingDistribution& warmup) {
    CalibrationResult r;
    r.t_b = base_threshold(reference);
    r.delta = training_delta(warmup, reference);
    r.t = r.t_b + r.delta;
    r.reference_summary = reference.summary();
    r.warmup_summary = warmup.summary();
    r.negative_delta_warning = r.delta < 0.0;
    return r;
}

TimingDistribution collect_timings(Environment& env, GameKind kind, const RewardConfig& rc,
                                   uint64_t master_seed, const char* purpose, int episodes,
                                   const Policy& policy) {
    if (episodes <= 0) throw std::invalid_argument("collect_timings: episodes must be positive");
    TimingDistribution dist;
    for (int e = 0; e < episodes; ++e) {
        EpisodeTrace t =
            run_episode(env, kind, rc, derive_seed(master_seed, purpose, static_cast<uint64_t>(e)), policy);
        for (const auto& s : t.steps) dist.samples.push_back(s.rt_ms);
    }
    return dist;
}

TimingDistribution collect_reference(Environment& env, GameKind kind, const RewardConfig& rc,
                                     uint64_t master_seed, int episodes, const Policy& baseline_policy) {
    return collect_timings(env, kind, rc, master_seed, "calib-reference", episodes, baseline_policy);
}

TimingDistribution warmup_phase(Environment& env, GameKind kind, const RewardConfig& rc,
                                uint64_t master_seed, int episodes, const Policy& baseline_policy) {
    return collect_timings(env, kind, rc, master_seed, "calib-warmup", episodes, baseline_policy);
}

StabilityResult stability_check(const std::vector<int>& actions, Environment& env, int repeats,
                                uint64_t master_seed) {
    if (actions.empty()) throw std::invalid_argument("stability_check: empty action sequence");
    if (repeats < 2) throw std::invalid_argument("stability_check: need at least 2 repeats");

    StabilityResult res;
    size_t min_len = actions.size();
    for (int r = 0; r < repeats; ++r) {
        env.reset(derive_seed(master_seed, "stability", static_cast<uint64_t>(r)));
        std::vector<double> row;
        for (int a : actions) {
            if (env.terminal()) break;
            row.push_back(env.step(a).timing.rt_ms);
        }
        min_len = std::min(min_len, row.size());
        res.timing_matrix.push_back(std::move(row));
    }
    for (auto& row : res.timing_matrix) row.resize(min_len);

    std::vector<double> rhos, pvals;
    for (size_t i = 0; i < res.timing_matrix.size(); ++i)
        for (size_t j = i + 1; j < res.timing_matrix.size(); ++j) {
            auto t = stats::spearman(res.timing_matrix[i], res.timing_matrix[j]);
            rhos.push_back(t.statistic);
            pvals.push_back(t.p_value);
        }
    std::vector<double> adj = stats::holm_adjust(pvals);
    res.min_rho = *std::min_element(rhos.begin(), rhos.end());
    res.median_rho = stats::descriptive(rhos).median;
    res.max_adjusted_p = *std::max_element(adj.begin(), adj.end());
    res.all_significant = res.max_adjusted_p < 0.05;
    return res;
}

}  // namespace reline
