#include "reline/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reline::detect {

PointKey bin_point(double x, double y, const BinResolution& res) {
    return {static_cast<long>(std::floor(x / res.x_width)), static_cast<long>(std::floor(y / res.y_width))};
}

double PointStats::confidence() const {
    if (coverage < 1) throw std::logic_error("detector: confidence of uncovered point");
    return 100.0 * static_cast<double>(exceedances) / static_cast<double>(coverage);
}

PointSink::PointSink(BinResolution res, double threshold_ms, uint64_t reservoir_seed)
    : res_(res), threshold_(threshold_ms), reservoir_rng_(reservoir_seed) {}

void PointSink::record(double x, double y, double rt_ms, long episode_id) {
    PointKey key = bin_point(x, y, res_);
    PointStats& ps = map_[key];
    ps.key = key;
    ++ps.coverage;
    if (rt_ms > threshold_) ++ps.exceedances;  // strict: rT == t is not an exceedance
    ps.episodes.insert(episode_id);
    ++ps.timings_seen;
    if (static_cast<long>(ps.timings.size()) < PointStats::kMaxTimings) {
        ps.timings.push_back(rt_ms);
    } else {
        long j = uniform_int(reservoir_rng_, 0, static_cast<int>(std::min<long>(ps.timings_seen - 1, INT32_MAX)));
        if (j < PointStats::kMaxTimings) ps.timings[static_cast<size_t>(j)] = rt_ms;
    }
}

void PointSink::merge(const PointSink& other) {
    if (!(other.res_ == res_) || other.threshold_ != threshold_)
        throw std::invalid_argument("detector: merge with mismatched sink");
    for (const auto& [key, ops] : other.map_) {
        PointStats& ps = map_[key];
        ps.key = key;
        ps.coverage += ops.coverage;
        ps.exceedances += ops.exceedances;
        ps.episodes.insert(ops.episodes.begin(), ops.episodes.end());
        ps.timings_seen += ops.timings_seen;
        ps.timings.insert(ps.timings.end(), ops.timings.begin(), ops.timings.end());
        if (static_cast<long>(ps.timings.size()) > PointStats::kMaxTimings) {
            std::shuffle(ps.timings.begin(), ps.timings.end(), reservoir_rng_);
            ps.timings.resize(PointStats::kMaxTimings);
        }
    }
}

std::vector<LowFpsPoint> PointSink::classify(double min_confidence_pct) const {
    std::vector<LowFpsPoint> out;
    for (const auto& [key, ps] : map_) {
        if (ps.coverage < 1) continue;
        if (ps.confidence() > min_confidence_pct) {
            LowFpsPoint p;
            p.stats = ps;
            auto d = stats::descriptive(ps.timings);
            p.median_rt = d.median;
            p.max_rt = d.max;
            out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end(), [](const LowFpsPoint& a, const LowFpsPoint& b) {
        if (a.median_rt != b.median_rt) return a.median_rt > b.median_rt;
        return a.stats.key < b.stats.key;
    });
    return out;
}

std::set<PointKey> overlap(const std::vector<LowFpsPoint>& a, const BinResolution& res_a,
                           const std::vector<LowFpsPoint>& b, const BinResolution& res_b) {
    if (!(res_a == res_b)) throw std::invalid_argument("detector: overlap with mismatched resolutions");
    std::set<PointKey> sa, out;
    for (const auto& p : a) sa.insert(p.stats.key);
    for (const auto& p : b)
        if (sa.count(p.stats.key)) out.insert(p.stats.key);
    return out;
}

GroupSummary summarize_group(const std::string& name, const std::vector<LowFpsPoint>& points) {
    GroupSummary g;
    g.name = name;
    g.point_count = points.size();
    if (points.empty()) return g;
    std::vector<double> timings, confidences;
    double coverage_sum = 0.0;
    for (const auto& p : points) {
        timings.insert(timings.end(), p.stats.timings.begin(), p.stats.timings.end());
        confidences.push_back(p.stats.confidence());
        coverage_sum += static_cast<double>(p.stats.coverage);
    }
    g.timing_stats = stats::descriptive(timings);
    g.confidence_stats = stats::descriptive(confidences);
    g.avg_coverage = coverage_sum / static_cast<double>(points.size());
    return g;
}

GroupSummary summarize_regular(const std::vector<const PointSink*>& sinks) {
    GroupSummary g;
    g.name = "regular-fps";
    // a bin counts as regular only if no sink ever saw it exceed the threshold
    std::set<PointKey> any_exceed;
    for (const PointSink* s : sinks)
        for (const auto& [key, ps] : s->stats_map())
            if (ps.exceedances > 0) any_exceed.insert(key);
    std::vector<double> timings;
    std::set<PointKey> seen;
    for (const PointSink* s : sinks)
        for (const auto& [key, ps] : s->stats_map())
            if (!any_exceed.count(key)) {
                timings.insert(timings.end(), ps.timings.begin(), ps.timings.end());
                seen.insert(key);
            }
    g.point_count = seen.size();
    if (!timings.empty()) g.timing_stats = stats::descriptive(timings);
    return g;
}

}  // namespace reline::detect
