#include "reline/racesim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reline {

RaceSimEnv::RaceSimEnv(RaceSimConfig cfg) : cfg_(std::move(cfg)) {
    spec_.name = "racesim";
    spec_.action_count = 5;
    spec_.observation_shape = {5};
    spec_.max_episode_steps = cfg_.max_episode_steps;
    spec_.episode_time_limit_ms = 90'000;
    spec_.frames_per_action = 4;
}

GameObservation RaceSimEnv::observe() const {
    return {Tensor({5}, {state_.centering / cfg_.centering_hard_limit,
                         state_.path_done / cfg_.track_length,
                         state_.speed / cfg_.max_speed,
                         state_.heading / cfg_.max_heading,
                         finished_ ? 1.0 : 0.0}),
            1};
}

GameObservation RaceSimEnv::reset(uint64_t seed) {
    rng_.seed(seed);
    state_ = RaceState{};
    terminal_ = false;
    finished_ = false;
    steps_ = 0;
    stuck_counter_ = 0;
    return observe();
}

StepResult RaceSimEnv::step(int action) {
    if (terminal_) throw std::logic_error("racesim: step on terminal state");
    if (action < 0 || action > 4) throw std::logic_error("racesim: bad action");

    switch (action) {
        case 0: state_.heading -= cfg_.steer_step; break;
        case 1: state_.heading += cfg_.steer_step; break;
        case 2: state_.speed += cfg_.accel; break;
        case 3: state_.speed -= cfg_.brake; break;
        default: break;
    }
    state_.heading = std::clamp(state_.heading, -cfg_.max_heading, cfg_.max_heading);
    double drag = cfg_.drag;
    if (std::fabs(state_.centering) > cfg_.track_half_width) drag += cfg_.offroad_drag;
    state_.speed = std::clamp(state_.speed - drag, 0.0, cfg_.max_speed);

    double prev_y = state_.path_done;
    state_.centering += state_.speed * std::sin(state_.heading);
    state_.centering = std::clamp(state_.centering, -cfg_.centering_hard_limit, cfg_.centering_hard_limit);
    double forward = state_.speed * std::cos(state_.heading);
    if (forward > 0.0) state_.path_done += forward;  // path_done never decreases

    double dy = state_.path_done - prev_y;
    if (dy > 1e-9) stuck_counter_ = 0;
    else ++stuck_counter_;

    ++steps_;
    finished_ = state_.path_done >= cfg_.track_length;
    if (finished_) state_.path_done = cfg_.track_length;
    terminal_ = finished_ || steps_ >= cfg_.max_episode_steps || stuck_counter_ >= cfg_.stuck_steps;

    StepResult r;
    r.events.finished = finished_;
    r.events.terminal = terminal_;
    r.progress_delta = dy;
    r.centering_raw = state_.centering;
    r.x = normalized_centering();
    r.y = normalized_path_done();
    r.timing = {r.x, r.y, cfg_.cost_field.sample(r.x, r.y, rng_)};
    r.observation = observe();
    return r;
}

}  // namespace reline
