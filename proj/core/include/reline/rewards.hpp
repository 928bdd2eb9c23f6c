#pragma once

#include <algorithm>
#include <string>

namespace reline {

// Per-step reward split: total = game + perf + bonus. The performance term
// holds either the low-FPS reward (racesim) or the injected-bug reward
// (cartpole/dotmaze), depending on the configured study.
struct RewardBreakdown {
    double game = 0.0;
    double perf = 0.0;
    double bonus = 0.0;
    double total() const { return game + perf + bonus; }
};

enum class RewardMode { Baseline, Reline };
enum class BonusMode { Fixed, Proportional };

struct RewardConfig {
    RewardMode mode = RewardMode::Baseline;
    double centering_limit = 20.0;    // theta, raw centering units
    double progress_cap = 10.0;       // M
    double finish_bonus_fixed = 1000.0;
    double perf_reward_value = 10.0;
    double perf_bonus_multiplier = 10.0;
    double bug_reward_value = 50.0;
    double low_fps_threshold_ms = 0.0;  // t; must be calibrated for reline racesim
    BonusMode bonus_mode = BonusMode::Fixed;
};

inline double game_reward_cartpole(bool step_survived) { return step_survived ? 1.0 : 0.0; }

inline double game_reward_dotmaze(int dots_eaten) { return static_cast<double>(dots_eaten); }

// -1 off track, else progress clamped to [0, M].
double game_reward_race(double centering, double delta_y, const RewardConfig& p);

// perf_reward_value when on track and rT strictly exceeds t, else 0.
double perf_reward(double centering, double rt_ms, double threshold_ms, const RewardConfig& p);

inline double bug_reward(int newly_triggered, const RewardConfig& p) {
    return p.bug_reward_value * newly_triggered;
}

// Only valid once the finish-line event occurred.
double finish_bonus(BonusMode mode, double sum_perf_rewards, const RewardConfig& p);

}  // namespace reline
