#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "reline/rng.hpp"
#include "reline/stats.hpp"

namespace reline::detect {

struct BinResolution {
    double x_width = 1.0;
    double y_width = 1.0;
    bool operator==(const BinResolution&) const = default;
};

struct PointKey {
    long x_bin = 0;
    long y_bin = 0;
    auto operator<=>(const PointKey&) const = default;
};

PointKey bin_point(double x, double y, const BinResolution& res);

// Exceedance/coverage counters stay exact; raw timings switch to reservoir
// sampling past kMaxTimings per bin.
struct PointStats {
    PointKey key;
    long coverage = 0;
    long exceedances = 0;
    std::vector<double> timings;
    long timings_seen = 0;
    std::set<long> episodes;

    static constexpr long kMaxTimings = 4096;

    double confidence() const;  // percentage, needs coverage >= 1
};

struct LowFpsPoint {
    PointStats stats;
    double median_rt = 0.0;
    double max_rt = 0.0;
};

class PointSink {
public:
    explicit PointSink(BinResolution res, double threshold_ms, uint64_t reservoir_seed = 0);

    void record(double x, double y, double rt_ms, long episode_id);
    void merge(const PointSink& other);

    const BinResolution& resolution() const { return res_; }
    double threshold() const { return threshold_; }
    const std::map<PointKey, PointStats>& stats_map() const { return map_; }

    // Bins with confidence strictly above min_confidence_pct, sorted by
    // median rT descending (key ascending on ties).
    std::vector<LowFpsPoint> classify(double min_confidence_pct = 50.0) const;

private:
    BinResolution res_;
    double threshold_;
    std::map<PointKey, PointStats> map_;
    Rng reservoir_rng_;
};

std::set<PointKey> overlap(const std::vector<LowFpsPoint>& a, const BinResolution& res_a,
                           const std::vector<LowFpsPoint>& b, const BinResolution& res_b);

struct GroupSummary {
    std::string name;
    size_t point_count = 0;
    stats::Descriptive timing_stats;
    stats::Descriptive confidence_stats;
    double avg_coverage = 0.0;
};

// Per-group distribution summaries for the report: one group per agent's
// low-FPS set plus the regular-FPS baseline group.
GroupSummary summarize_group(const std::string& name, const std::vector<LowFpsPoint>& points);
GroupSummary summarize_regular(const std::vector<const PointSink*>& sinks);

}  // namespace reline::detect
