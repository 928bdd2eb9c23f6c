#pragma once

#include "reline/cost_field.hpp"
#include "reline/env.hpp"

namespace reline {

struct RaceState {
    double centering = 0.0;  // raw x, signed distance from track center
    double path_done = 0.0;  // raw y, arc length from the start line
    double speed = 0.0;      // units per step
    double heading = 0.0;    // radians, 0 = straight down the track
};

// 1-D track parameterized by arc length with bicycle-style kinematics and a
// synthetic render-cost field evaluated in normalized coordinates
// (path_done 0..100, centering scaled by centering_norm).
struct RaceSimConfig {
    double track_length = 600.0;
    double max_speed = 1.0;           // units per step
    double accel = 0.05;
    double brake = 0.10;
    double drag = 0.005;
    double steer_step = 0.08;         // radians per steer action
    double max_heading = 0.6;
    double centering_hard_limit = 22.0;  // raw units, kart clamps here
    double track_half_width = 10.0;      // raw units, |x| beyond is off-road
    double offroad_drag = 0.02;
    double centering_norm = 1.8;         // raw -> normalized report scale
    int max_episode_steps = 900;         // 90 s at 10 steps/s
    int stuck_steps = 200;               // no progress for this long ends the episode
    RenderCostField cost_field;
};

class RaceSimEnv final : public Environment {
public:
    explicit RaceSimEnv(RaceSimConfig cfg = {});

    const EnvSpec& spec() const override { return spec_; }
    GameObservation reset(uint64_t seed) override;
    // 0 steer-left, 1 steer-right, 2 throttle, 3 brake, 4 noop
    StepResult step(int action) override;
    bool terminal() const override { return terminal_; }
    int steps_taken() const override { return steps_; }

    const RaceState& state() const { return state_; }
    const RaceSimConfig& config() const { return cfg_; }
    double normalized_path_done() const { return 100.0 * state_.path_done / cfg_.track_length; }
    double normalized_centering() const { return cfg_.centering_norm * state_.centering; }

private:
    GameObservation observe() const;

    RaceSimConfig cfg_;
    EnvSpec spec_;
    RaceState state_;
    Rng rng_;
    bool terminal_ = true;
    bool finished_ = false;
    int steps_ = 0;
    int stuck_counter_ = 0;
};

}  // namespace reline
