#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reline/calibration.hpp"
#include "reline/config.hpp"
#include "reline/cross_entropy.hpp"
#include "reline/dqn.hpp"
#include "reline/report.hpp"

namespace reline::run {

struct RunnerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A trained (or trivially random) agent plus the env spec it was built for.
struct TrainedAgent {
    std::string kind;  // cross-entropy | dqn | random
    EnvSpec env_spec;
    std::optional<CrossEntropyAgent> ce;
    std::optional<DqnAgent> dqn;
};

// Evaluation policy for the agent. Cross-entropy agents act greedily unless
// eval_sample is set; random agents draw from a seeded stream.
Policy make_policy(const TrainedAgent& agent, const AgentConfig& acfg, uint64_t seed);

struct TrainOutput {
    TrainedAgent agent;
    std::vector<EpisodeTrace> traces;
};

TrainOutput train_agent(const RunConfig& cfg, Environment& env);

void save_agent(const TrainedAgent& agent, const std::string& path);
TrainedAgent load_agent(const std::string& path, const AgentConfig& acfg, const EnvSpec& expected_spec);

CalibrationResult run_calibration(const RunConfig& cfg, Environment& env, const Policy& baseline_policy);
nlohmann::ordered_json calibration_to_json(const CalibrationResult& c);
CalibrationResult calibration_from_json(const nlohmann::json& j);

// Builds a fresh policy for one evaluation episode from an episode-specific
// seed; keeps episode results independent of execution order so parallel and
// serial evaluation produce identical artifacts.
using PolicyFactory = std::function<Policy(uint64_t episode_policy_seed)>;

PolicyFactory make_policy_factory(const TrainedAgent& agent, const AgentConfig& acfg);

struct LoadTestInput {
    std::string name;
    PolicyFactory factory;
};

struct EvalArtifacts {
    std::string name;
    std::vector<EpisodeTrace> traces;
    detect::PointSink sink;
    std::vector<long> per_repeat_bug_tallies;  // episodes triggering >= 1 bug, per repeat
};

struct LoadTestOutput {
    nlohmann::ordered_json report;
    std::vector<EvalArtifacts> artifacts;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

// Evaluation episodes x repeats per agent; every step feeds the detector at
// the resolved threshold. The report embeds the threshold actually used.
// jobs > 1 fans episodes out over worker threads, each with its own env from
// env_factory; output is byte-identical to the serial run.
LoadTestOutput run_loadtest(const RunConfig& cfg, Environment& env, const CalibrationResult& calib,
                            const std::vector<LoadTestInput>& agents, int jobs = 1,
                            const EnvFactory& env_factory = nullptr);

// Episodes whose trace triggered at least `min_distinct` distinct bug ids.
long episodes_with_distinct_bugs(const std::vector<EpisodeTrace>& traces, size_t min_distinct);

// Output-directory layout helpers (all paths relative to the run directory).
std::string manifest_path(const std::string& dir);
std::string checkpoint_path(const std::string& dir);
std::string calibration_path(const std::string& dir);
std::string report_path(const std::string& dir);
std::string training_traces_path(const std::string& dir);
std::string eval_traces_path(const std::string& dir, const std::string& agent_name);

void write_train_artifacts(const RunConfig& cfg, const TrainOutput& out, const std::string& dir);
void write_loadtest_artifacts(const LoadTestOutput& out, const std::string& dir);

}  // namespace reline::run
