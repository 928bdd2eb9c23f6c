#pragma once

#include "reline/nn.hpp"
#include "reline/rollout.hpp"

namespace reline {

struct CrossEntropyConfig {
    int batch_episodes = 16;       // n
    double elite_fraction = 0.70;  // m = round(n * fraction)
    double learning_rate = 0.01;
    double momentum = 0.9;
    int hidden_units = 128;
    int max_training_episodes = 3200;
    int sgd_minibatch = 128;
    int train_epochs = 1;  // supervised passes over the elite pairs per batch
    int elite_pool = 0;    // >0: keep the top-k episodes ever seen and train on them each batch
    double explore_eps = 0.0;  // training-time floor: pick a uniform action with this probability
};

int elite_count(int batch_episodes, double elite_fraction);

// Top-m episode indices by total reward; ties keep episode order.
std::vector<int> select_elites(const std::vector<double>& episode_rewards, int m);

class CrossEntropyAgent {
public:
    CrossEntropyAgent(const EnvSpec& env_spec, CrossEntropyConfig cfg, uint64_t seed);
    CrossEntropyAgent(nn::Network net, CrossEntropyConfig cfg);

    // Repeats [play n episodes, pick elites, one supervised pass toward the
    // elite (state, action) pairs] until the episode budget is spent.
    std::vector<EpisodeTrace> train(Environment& env, GameKind kind, const RewardConfig& rc,
                                    uint64_t master_seed);

    int act_greedy(const GameObservation& obs) const;
    int act_sample(const GameObservation& obs, Rng& rng) const;

    nn::Network& net() { return net_; }
    const nn::Network& net() const { return net_; }
    const CrossEntropyConfig& config() const { return cfg_; }

private:
    CrossEntropyConfig cfg_;
    nn::Network net_;
};

}  // namespace reline
