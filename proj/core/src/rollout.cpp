#include "reline/rollout.hpp"

#include "reline/rng.hpp"

namespace reline {

GameKind game_kind_for(const EnvSpec& spec) {
    if (spec.name == "cartpole-bug") return GameKind::Cartpole;
    if (spec.name == "dotmaze") return GameKind::DotMaze;
    return GameKind::Race;
}

RewardBreakdown step_reward(GameKind kind, const StepResult& sr, const RewardConfig& rc, double sum_perf) {
    RewardBreakdown rb;
    switch (kind) {
        case GameKind::Cartpole:
            rb.game = game_reward_cartpole(sr.step_survived);
            if (rc.mode == RewardMode::Reline)
                rb.perf = bug_reward(static_cast<int>(sr.events.bugs_triggered.size()), rc);
            break;
        case GameKind::DotMaze:
            rb.game = game_reward_dotmaze(sr.events.dots_eaten);
            if (rc.mode == RewardMode::Reline)
                rb.perf = bug_reward(static_cast<int>(sr.events.bugs_triggered.size()), rc);
            break;
        case GameKind::Race:
            rb.game = game_reward_race(sr.centering_raw, sr.progress_delta, rc);
            if (rc.mode == RewardMode::Reline)
                rb.perf = perf_reward(sr.centering_raw, sr.timing.rt_ms, rc.low_fps_threshold_ms, rc);
            if (sr.events.finished)
                rb.bonus = finish_bonus(rc.mode == RewardMode::Reline ? rc.bonus_mode : BonusMode::Fixed,
                                        sum_perf + rb.perf, rc);
            break;
    }
    return rb;
}

EpisodeTrace run_episode(Environment& env, GameKind kind, const RewardConfig& rc, uint64_t seed,
                         const Policy& policy) {
    EpisodeTrace t;
    t.env_seed = seed;
    GameObservation obs = env.reset(seed);
    double sum_perf = 0.0;
    while (!env.terminal()) {
        int action = policy(obs);
        StepResult sr = env.step(action);
        RewardBreakdown rb = step_reward(kind, sr, rc, sum_perf);
        sum_perf += rb.perf;

        TraceStep ts;
        ts.obs_digest = observation_digest(obs);
        ts.action = action;
        ts.game = rb.game;
        ts.perf = rb.perf;
        ts.bonus = rb.bonus;
        ts.x = sr.x;
        ts.y = sr.y;
        ts.rt_ms = sr.timing.rt_ms;
        t.steps.push_back(ts);

        t.total_game_reward += rb.game;
        t.total_perf_reward += rb.perf;
        t.total_bonus += rb.bonus;
        for (const auto& id : sr.events.bugs_triggered) t.bug_ids_found.push_back(id);
        if (sr.events.finished) t.finished = true;
        obs = std::move(sr.observation);
    }
    return t;
}

std::vector<EpisodeTrace> run_episodes(Environment& env, GameKind kind, const RewardConfig& rc,
                                       uint64_t master_seed, const char* purpose, int episodes,
                                       const Policy& policy) {
    std::vector<EpisodeTrace> traces;
    traces.reserve(static_cast<size_t>(episodes));
    for (int i = 0; i < episodes; ++i)
        traces.push_back(run_episode(env, kind, rc, derive_seed(master_seed, purpose, static_cast<uint64_t>(i)), policy));
    return traces;
}

}  // namespace reline
