#include "reline/cross_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reline {

int elite_count(int batch_episodes, double elite_fraction) {
    int m = static_cast<int>(std::lround(batch_episodes * elite_fraction));
    return std::clamp(m, 1, batch_episodes);
}

std::vector<int> select_elites(const std::vector<double>& episode_rewards, int m) {
    std::vector<int> order(episode_rewards.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return episode_rewards[static_cast<size_t>(a)] > episode_rewards[static_cast<size_t>(b)];
    });
    order.resize(static_cast<size_t>(std::min<int>(m, static_cast<int>(order.size()))));
    return order;
}

static nn::NetworkSpec policy_spec(const EnvSpec& env_spec, const CrossEntropyConfig& cfg, uint64_t seed) {
    int in = static_cast<int>(Tensor::count(env_spec.observation_shape));
    nn::NetworkSpec spec;
    spec.init_seed = seed;
    spec.layers = {nn::LayerSpec::dense(in, cfg.hidden_units), nn::LayerSpec::relu(),
                   nn::LayerSpec::dense(cfg.hidden_units, env_spec.action_count)};
    return spec;
}

CrossEntropyAgent::CrossEntropyAgent(const EnvSpec& env_spec, CrossEntropyConfig cfg, uint64_t seed)
    : cfg_(cfg), net_(policy_spec(env_spec, cfg, seed)) {}

CrossEntropyAgent::CrossEntropyAgent(nn::Network net, CrossEntropyConfig cfg)
    : cfg_(cfg), net_(std::move(net)) {}

int CrossEntropyAgent::act_greedy(const GameObservation& obs) const {
    Tensor out = net_.forward(obs.values);
    int best = 0;
    for (long i = 1; i < out.size(); ++i)
        if (out[i] > out[best]) best = static_cast<int>(i);
    return best;
}

int CrossEntropyAgent::act_sample(const GameObservation& obs, Rng& rng) const {
    Tensor p = nn::softmax(net_.forward(obs.values));
    double u = uniform01(rng);
    double acc = 0.0;
    for (long i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u <= acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
}

std::vector<EpisodeTrace> CrossEntropyAgent::train(Environment& env, GameKind kind, const RewardConfig& rc,
                                                   uint64_t master_seed) {
    Rng action_rng(derive_seed(master_seed, "ce-actions"));
    std::vector<EpisodeTrace> all_traces;
    int episodes_done = 0;
    int m = elite_count(cfg_.batch_episodes, cfg_.elite_fraction);
    // optional cross-batch elite buffer: best episodes ever seen, by total reward
    std::vector<std::pair<double, std::vector<std::pair<Tensor, int>>>> pool;

    while (episodes_done < cfg_.max_training_episodes) {
        int n = std::min(cfg_.batch_episodes, cfg_.max_training_episodes - episodes_done);
        std::vector<std::vector<std::pair<Tensor, int>>> batch_pairs(static_cast<size_t>(n));
        std::vector<double> batch_rewards(static_cast<size_t>(n));

        for (int e = 0; e < n; ++e) {
            auto& pairs = batch_pairs[static_cast<size_t>(e)];
            Policy policy = [&](const GameObservation& obs) {
                int a;
                if (cfg_.explore_eps > 0.0 && uniform01(action_rng) < cfg_.explore_eps)
                    a = uniform_int(action_rng, 0, net_.spec().layers.back().out - 1);
                else
                    a = act_sample(obs, action_rng);
                pairs.emplace_back(obs.values, a);
                return a;
            };
            uint64_t ep_seed = derive_seed(master_seed, "ce-train", static_cast<uint64_t>(episodes_done + e));
            EpisodeTrace t = run_episode(env, kind, rc, ep_seed, policy);
            batch_rewards[static_cast<size_t>(e)] = t.total_reward();
            all_traces.push_back(std::move(t));
        }
        episodes_done += n;

        std::vector<const std::pair<Tensor, int>*> train_pairs;
        if (cfg_.elite_pool > 0) {
            for (int e = 0; e < n; ++e)
                pool.emplace_back(batch_rewards[static_cast<size_t>(e)],
                                  std::move(batch_pairs[static_cast<size_t>(e)]));
            std::stable_sort(pool.begin(), pool.end(),
                             [](const auto& a, const auto& b) { return a.first > b.first; });
            if (static_cast<int>(pool.size()) > cfg_.elite_pool)
                pool.resize(static_cast<size_t>(cfg_.elite_pool));
            for (const auto& [r, pairs] : pool)
                for (const auto& p : pairs) train_pairs.push_back(&p);
        } else {
            std::vector<int> elites = select_elites(batch_rewards, std::min(m, n));
            for (int e : elites)
                for (const auto& p : batch_pairs[static_cast<size_t>(e)]) train_pairs.push_back(&p);
        }

        // fixed-order passes over the elite pairs
        for (int epoch = 0; epoch < cfg_.train_epochs; ++epoch) {
            for (size_t off = 0; off < train_pairs.size(); off += static_cast<size_t>(cfg_.sgd_minibatch)) {
                size_t end = std::min(train_pairs.size(), off + static_cast<size_t>(cfg_.sgd_minibatch));
                nn::ParameterSet grads = net_.zero_like();
                double scale = 1.0 / static_cast<double>(end - off);
                for (size_t i = off; i < end; ++i) {
                    nn::ForwardCache cache;
                    Tensor logits = net_.forward(train_pairs[i]->first, &cache);
                    auto [loss, grad] = nn::softmax_cross_entropy(logits, train_pairs[i]->second);
                    if (!std::isfinite(loss))
                        throw std::runtime_error("cross-entropy: non-finite loss at episode " +
                                                 std::to_string(episodes_done));
                    for (auto& g : grad.data) g *= scale;
                    grads.add_scaled(net_.backward(cache, grad), 1.0);
                }
                net_.sgd_step(grads, cfg_.learning_rate, cfg_.momentum);
            }
        }
    }
    return all_traces;
}

}  // namespace reline
