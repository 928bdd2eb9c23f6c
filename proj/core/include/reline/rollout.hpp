#pragma once

#include <functional>

#include "reline/env.hpp"
#include "reline/rewards.hpp"
#include "reline/trace.hpp"

namespace reline {

enum class GameKind { Cartpole, DotMaze, Race };

// Remote environments default to race-style rewards; built-ins map by name.
GameKind game_kind_for(const EnvSpec& spec);

using Policy = std::function<int(const GameObservation&)>;

// Reward for one step. sum_perf accumulates the episode's perf rewards so the
// proportional finish bonus can be computed at the terminal step.
RewardBreakdown step_reward(GameKind kind, const StepResult& sr, const RewardConfig& rc, double sum_perf);

EpisodeTrace run_episode(Environment& env, GameKind kind, const RewardConfig& rc, uint64_t seed,
                         const Policy& policy);

std::vector<EpisodeTrace> run_episodes(Environment& env, GameKind kind, const RewardConfig& rc,
                                       uint64_t master_seed, const char* purpose, int episodes,
                                       const Policy& policy);

}  // namespace reline
