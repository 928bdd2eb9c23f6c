#include "reline/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace reline {

double game_reward_race(double centering, double delta_y, const RewardConfig& p) {
    if (std::fabs(centering) > p.centering_limit) return -1.0;
    return std::max(std::min(delta_y, p.progress_cap), 0.0);
}

double perf_reward(double centering, double rt_ms, double threshold_ms, const RewardConfig& p) {
    if (std::fabs(centering) <= p.centering_limit && rt_ms > threshold_ms) return p.perf_reward_value;
    return 0.0;
}

double finish_bonus(BonusMode mode, double sum_perf_rewards, const RewardConfig& p) {
    if (mode == BonusMode::Fixed) return p.finish_bonus_fixed;
    return p.perf_bonus_multiplier * sum_perf_rewards;
}

}  // namespace reline
