#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "reline/cross_entropy.hpp"
#include "reline/detector.hpp"
#include "reline/dqn.hpp"
#include "reline/env.hpp"
#include "reline/rewards.hpp"

namespace reline {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnvConfig {
    std::string name;  // cartpole-bug | dotmaze | racesim | remote
    nlohmann::json params = nlohmann::json::object();
};

struct AgentConfig {
    std::string kind;  // cross-entropy | dqn | random
    CrossEntropyConfig ce;
    DqnConfig dqn;
    bool eval_sample = false;  // cross-entropy evaluation: sample instead of argmax
};

struct StudyConfig {
    int training_episodes = 0;
    int evaluation_episodes = 1000;
    int repeats = 1;
    uint64_t master_seed = 1;
    int calib_reference_episodes = 300;
    int calib_warmup_episodes = 100;
};

struct RunConfig {
    EnvConfig env;
    AgentConfig agent;
    RewardConfig reward;
    bool auto_threshold = false;  // reward.t = "auto": take t from a calibration artifact
    StudyConfig study;
    detect::BinResolution bins;
    std::string output_dir = "reline-out";
};

RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::ordered_json run_config_to_json(const RunConfig& c);
RunConfig load_run_config(const std::string& path);

// Named presets: {cartpole,dotmaze,race}-{paper,desk}.
RunConfig preset_config(const std::string& name);

std::unique_ptr<Environment> make_env(const EnvConfig& cfg);

}  // namespace reline
