#include "reline/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reline {

int dqn_select_action(const nn::Network& net, const Tensor& observation, double epsilon, Rng& rng) {
    int actions = net.output_size();
    if (epsilon > 0.0 && uniform01(rng) < epsilon) return uniform_int(rng, 0, actions - 1);
    Tensor q = net.forward(observation);
    int best = 0;
    for (long i = 1; i < q.size(); ++i)
        if (q[i] > q[best]) best = static_cast<int>(i);
    return best;
}

double epsilon_for_episode(const DqnConfig& cfg, int episode) {
    double decay_episodes = cfg.eps_decay_fraction * cfg.max_training_episodes;
    if (decay_episodes <= 0.0) return cfg.eps_end;
    double f = std::min(1.0, episode / decay_episodes);
    return cfg.eps_start + f * (cfg.eps_end - cfg.eps_start);
}

double dqn_update(nn::Network& net, const nn::Network& target_net,
                  const std::vector<const ExperienceInstance*>& batch, const DqnConfig& cfg) {
    nn::ParameterSet grads = net.zero_like();
    double scale = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (const ExperienceInstance* e : batch) {
        double y = e->reward;
        if (!e->next_terminal && cfg.gamma > 0.0) {
            Tensor qn = target_net.forward(e->next_state);
            double mx = qn[0];
            for (long i = 1; i < qn.size(); ++i) mx = std::max(mx, qn[i]);
            y += cfg.gamma * mx;
        }
        nn::ForwardCache cache;
        Tensor q = net.forward(e->prev_state, &cache);
        double err = q[e->action] - y;
        loss += err * err * scale;
        Tensor grad_out(q.shape);
        grad_out[e->action] = 2.0 * err * scale;
        grads.add_scaled(net.backward(cache, grad_out), 1.0);
    }
    if (!std::isfinite(loss)) throw std::runtime_error("dqn: non-finite loss");
    net.sgd_step(grads, cfg.learning_rate, cfg.momentum);
    return loss;
}

nn::NetworkSpec DqnAgent::value_spec(const EnvSpec& env_spec, const DqnConfig& cfg, uint64_t seed) {
    nn::NetworkSpec spec;
    spec.init_seed = seed;
    const auto& shape = env_spec.observation_shape;
    if (shape.size() == 3) {
        // stacked grid observation -> small conv stack
        int c = shape[0], h = shape[1], w = shape[2];
        auto c1 = nn::LayerSpec::conv(c, 8, 3, 2, h, w);
        auto c2 = nn::LayerSpec::conv(8, 16, 3, 2, c1.out_h(), c1.out_w());
        int flat = 16 * c2.out_h() * c2.out_w();
        spec.layers = {c1, nn::LayerSpec::relu(), c2, nn::LayerSpec::relu(),
                       nn::LayerSpec::dense(flat, cfg.dense_hidden), nn::LayerSpec::relu(),
                       nn::LayerSpec::dense(cfg.dense_hidden, env_spec.action_count)};
    } else {
        int in = static_cast<int>(Tensor::count(shape));
        spec.layers = {nn::LayerSpec::dense(in, cfg.dense_hidden), nn::LayerSpec::relu(),
                       nn::LayerSpec::dense(cfg.dense_hidden, cfg.dense_hidden), nn::LayerSpec::relu(),
                       nn::LayerSpec::dense(cfg.dense_hidden, env_spec.action_count)};
    }
    return spec;
}

DqnAgent::DqnAgent(const EnvSpec& env_spec, DqnConfig cfg, uint64_t seed)
    : cfg_(cfg), net_(value_spec(env_spec, cfg, seed)) {}

DqnAgent::DqnAgent(nn::Network net, DqnConfig cfg) : cfg_(cfg), net_(std::move(net)) {}

int DqnAgent::act_greedy(const GameObservation& obs) const {
    Rng unused(0);
    return dqn_select_action(net_, obs.values, 0.0, unused);
}

std::vector<EpisodeTrace> DqnAgent::train(Environment& env, GameKind kind, const RewardConfig& rc,
                                          uint64_t master_seed) {
    Rng rng(derive_seed(master_seed, "dqn-actions"));
    Rng sample_rng(derive_seed(master_seed, "dqn-sample"));
    ReplayBuffer buffer(cfg_.replay_capacity);
    nn::Network target = net_;
    std::vector<EpisodeTrace> traces;
    int env_steps = 0;
    int updates = 0;

    for (int episode = 0; episode < cfg_.max_training_episodes; ++episode) {
        double eps = epsilon_for_episode(cfg_, episode);
        Tensor prev_obs;
        Policy policy = [&](const GameObservation& obs) {
            prev_obs = obs.values;
            return dqn_select_action(net_, obs.values, eps, rng);
        };
        uint64_t ep_seed = derive_seed(master_seed, "dqn-train", static_cast<uint64_t>(episode));

        EpisodeTrace t;
        t.env_seed = ep_seed;
        GameObservation obs = env.reset(ep_seed);
        double sum_perf = 0.0;
        while (!env.terminal()) {
            int action = policy(obs);
            StepResult sr = env.step(action);
            RewardBreakdown rb = step_reward(kind, sr, rc, sum_perf);
            sum_perf += rb.perf;

            buffer.push({prev_obs, action, sr.observation.values, rb.total(), sr.events.terminal});
            ++env_steps;

            if (buffer.size() >= cfg_.min_buffer_before_training && env_steps % cfg_.update_interval == 0) {
                dqn_update(net_, cfg_.target_sync_interval > 0 ? target : net_,
                           buffer.sample(cfg_.batch_size, sample_rng), cfg_);
                ++updates;
                if (cfg_.target_sync_interval > 0 && updates % cfg_.target_sync_interval == 0)
                    target = net_;
            }

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
        traces.push_back(std::move(t));
    }
    return traces;
}

}  // namespace reline
