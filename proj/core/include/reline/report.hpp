#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reline/calibration.hpp"
#include "reline/config.hpp"
#include "reline/detector.hpp"
#include "reline/rollout.hpp"

namespace reline::report {

struct ReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One agent's evaluation output fed into the report builder.
struct AgentArtifacts {
    std::string name;  // e.g. reline | baseline | random
    const std::vector<EpisodeTrace>* traces = nullptr;
    const detect::PointSink* sink = nullptr;
    const std::vector<long>* per_repeat_bug_tallies = nullptr;  // optional
};

// Indices into the agent's trace list: the trace with the highest recorded
// timing inside the point's bin first, then up to two more distinct traces.
std::vector<size_t> select_evidence(const detect::LowFpsPoint& point,
                                    const std::vector<EpisodeTrace>& traces,
                                    const detect::BinResolution& res);

nlohmann::ordered_json build_report(const RunConfig& cfg, const CalibrationResult& calib,
                                    const std::vector<AgentArtifacts>& agents);

// Structural validation; unknown fields anywhere are an error.
void validate_report(const nlohmann::json& report);

void write_report(const std::string& path, const nlohmann::ordered_json& report);
nlohmann::ordered_json read_report(const std::string& path);

// Tabular exports under `dir`: per-agent point tables, per-group timing
// summaries, and the two scatter panels. Values print with round-trip
// precision so re-parsing reproduces the report numbers exactly.
void export_plot_data(const nlohmann::json& report, const std::string& dir);

struct ReplayResult {
    bool matched = true;
    size_t divergence_step = 0;
    std::string field;  // first mismatching field
    double expected = 0.0;
    double actual = 0.0;
};

// Re-runs the trace's actions from its env seed and compares every recorded
// step value exactly.
ReplayResult replay_trace(const EpisodeTrace& trace, Environment& env, GameKind kind,
                          const RewardConfig& rc);

std::string format_compare_summary(const nlohmann::json& report);

}  // namespace reline::report
