#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reline/env.hpp"
#include "reline/rewards.hpp"

#include <nlohmann/json.hpp>

namespace reline {

struct TraceStep {
    uint64_t obs_digest = 0;
    int action = 0;
    double game = 0.0;
    double perf = 0.0;
    double bonus = 0.0;
    double x = 0.0;
    double y = 0.0;
    double rt_ms = 0.0;
};

// Replayable record of one episode: with the env seed and the action list a
// deterministic environment reproduces every reward and timing exactly.
struct EpisodeTrace {
    uint64_t env_seed = 0;
    std::vector<TraceStep> steps;
    double total_game_reward = 0.0;
    double total_perf_reward = 0.0;
    double total_bonus = 0.0;
    std::vector<std::string> bug_ids_found;
    bool finished = false;

    double total_reward() const { return total_game_reward + total_perf_reward + total_bonus; }
};

uint64_t observation_digest(const GameObservation& obs);

nlohmann::ordered_json trace_to_json(const EpisodeTrace& t);
EpisodeTrace trace_from_json(const nlohmann::json& j);

void write_traces(const std::string& path, const std::vector<EpisodeTrace>& traces);
std::vector<EpisodeTrace> read_traces(const std::string& path);

}  // namespace reline
