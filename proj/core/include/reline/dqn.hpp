#pragma once

#include "reline/nn.hpp"
#include "reline/replay_buffer.hpp"
#include "reline/rollout.hpp"

namespace reline {

struct DqnConfig {
    double gamma = 0.99;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double momentum = 0.0;
    double eps_start = 1.0;
    double eps_end = 0.05;
    double eps_decay_fraction = 0.6;  // of max_training_episodes
    int target_sync_interval = 1000;  // update steps; 0 disables the target net
    int replay_capacity = 10000;
    int min_buffer_before_training = 10000;
    int update_interval = 4;  // env steps between gradient updates
    int max_training_episodes = 1000;
    int dense_hidden = 64;
};

// Epsilon-greedy over the net's Q outputs; ties pick the lowest index.
int dqn_select_action(const nn::Network& net, const Tensor& observation, double epsilon, Rng& rng);

double epsilon_for_episode(const DqnConfig& cfg, int episode);

// One minibatch update toward r + gamma * max_a Q_target(s', a); the
// bootstrap term is dropped at terminal s'. Returns the mean squared error.
double dqn_update(nn::Network& net, const nn::Network& target_net,
                  const std::vector<const ExperienceInstance*>& batch, const DqnConfig& cfg);

class DqnAgent {
public:
    DqnAgent(const EnvSpec& env_spec, DqnConfig cfg, uint64_t seed);
    DqnAgent(nn::Network net, DqnConfig cfg);

    std::vector<EpisodeTrace> train(Environment& env, GameKind kind, const RewardConfig& rc,
                                    uint64_t master_seed);

    int act_greedy(const GameObservation& obs) const;

    nn::Network& net() { return net_; }
    const nn::Network& net() const { return net_; }
    const DqnConfig& config() const { return cfg_; }

    static nn::NetworkSpec value_spec(const EnvSpec& env_spec, const DqnConfig& cfg, uint64_t seed);

private:
    DqnConfig cfg_;
    nn::Network net_;
};

}  // namespace reline
