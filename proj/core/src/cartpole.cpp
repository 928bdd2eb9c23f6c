#include "reline/cartpole.hpp"

#include <cmath>
#include <stdexcept>

namespace reline {

std::vector<std::string> bug_check(double x, std::vector<BugZone>& zones) {
    std::vector<std::string> out;
    for (auto& z : zones) {
        if (!z.triggered_this_episode && z.contains(x)) {
            z.triggered_this_episode = true;
            out.push_back(z.id);
        }
    }
    return out;
}

CartPoleState cartpole_dynamics(const CartPoleState& s, double force, const CartPoleConfig& cfg) {
    double total_mass = cfg.cart_mass + cfg.pole_mass;
    double pml = cfg.pole_mass * cfg.pole_half_length;
    double cos_t = std::cos(s.angle);
    double sin_t = std::sin(s.angle);
    double temp = (force + pml * s.angle_dot * s.angle_dot * sin_t) / total_mass;
    double angle_acc = (cfg.gravity * sin_t - cos_t * temp) /
                       (cfg.pole_half_length * (4.0 / 3.0 - cfg.pole_mass * cos_t * cos_t / total_mass));
    double x_acc = temp - pml * angle_acc * cos_t / total_mass;

    CartPoleState n;
    n.x = s.x + cfg.tau * s.x_dot;
    n.x_dot = s.x_dot + cfg.tau * x_acc;
    n.angle = s.angle + cfg.tau * s.angle_dot;
    n.angle_dot = s.angle_dot + cfg.tau * angle_acc;
    return n;
}

CartPoleEnv::CartPoleEnv(CartPoleConfig cfg) : cfg_(std::move(cfg)) {
    spec_.name = "cartpole-bug";
    spec_.action_count = 2;
    spec_.observation_shape = {4};
    spec_.max_episode_steps = cfg_.max_episode_steps;
    spec_.frames_per_action = 1;
    zones_ = cfg_.bug_zones;
}

GameObservation CartPoleEnv::observe() const {
    return {Tensor({4}, {state_.x, state_.x_dot, state_.angle, state_.angle_dot}), 1};
}

GameObservation CartPoleEnv::reset(uint64_t seed) {
    rng_.seed(seed);
    state_.x = (uniform01(rng_) * 2.0 - 1.0) * cfg_.init_range;
    state_.x_dot = (uniform01(rng_) * 2.0 - 1.0) * cfg_.init_range;
    state_.angle = (uniform01(rng_) * 2.0 - 1.0) * cfg_.init_range;
    state_.angle_dot = (uniform01(rng_) * 2.0 - 1.0) * cfg_.init_range;
    zones_ = cfg_.bug_zones;
    for (auto& z : zones_) z.triggered_this_episode = false;
    terminal_ = false;
    steps_ = 0;
    return observe();
}

StepResult CartPoleEnv::step(int action) {
    if (terminal_) throw std::logic_error("cartpole: step on terminal state");
    double force = (action == 1) ? cfg_.force_mag : -cfg_.force_mag;
    state_ = cartpole_dynamics(state_, force, cfg_);
    ++steps_;

    StepResult r;
    bool failed = std::fabs(state_.angle) > cfg_.angle_limit_rad ||
                  std::fabs(state_.x) > cfg_.position_limit;
    terminal_ = failed || steps_ >= cfg_.max_episode_steps;
    r.step_survived = !failed;
    r.events.terminal = terminal_;
    r.events.bugs_triggered = bug_check(state_.x, zones_);
    r.observation = observe();
    r.x = state_.x;
    r.y = 0.0;
    r.timing = {r.x, r.y, cfg_.cost_field.sample(r.x, r.y, rng_)};
    return r;
}

}  // namespace reline
