#pragma once

#include "reline/cost_field.hpp"
#include "reline/env.hpp"

namespace reline {

struct CartPoleState {
    double x = 0.0;
    double x_dot = 0.0;
    double angle = 0.0;
    double angle_dot = 0.0;
};

struct CartPoleConfig {
    // canonical cart-pole constants
    double gravity = 9.8;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double pole_half_length = 0.5;
    double force_mag = 10.0;
    double tau = 0.02;               // integration step, seconds
    double angle_limit_rad = 12.0 * 3.14159265358979323846 / 180.0;
    double position_limit = 2.4;
    int max_episode_steps = 1000;
    double init_range = 0.05;        // uniform init for all four state vars
    std::vector<BugZone> bug_zones = {{"bug-left", -0.50, -0.45, false},
                                      {"bug-right", 0.45, 0.50, false}};
    RenderCostField cost_field;
};

class CartPoleEnv final : public Environment {
public:
    explicit CartPoleEnv(CartPoleConfig cfg = {});

    const EnvSpec& spec() const override { return spec_; }
    GameObservation reset(uint64_t seed) override;
    StepResult step(int action) override;  // 0 = left, 1 = right
    bool terminal() const override { return terminal_; }
    int steps_taken() const override { return steps_; }

    const CartPoleState& state() const { return state_; }
    void set_state(const CartPoleState& s) { state_ = s; }

private:
    GameObservation observe() const;

    CartPoleConfig cfg_;
    EnvSpec spec_;
    CartPoleState state_;
    std::vector<BugZone> zones_;
    Rng rng_;
    bool terminal_ = true;
    int steps_ = 0;
};

// One Euler integration step of the standard cart-pole dynamics.
CartPoleState cartpole_dynamics(const CartPoleState& s, double force, const CartPoleConfig& cfg);

}  // namespace reline
