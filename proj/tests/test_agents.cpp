#include <doctest.h>

#include <cmath>
#include <set>

#include "reline/cross_entropy.hpp"
#include "reline/dqn.hpp"
#include "reline/random_agent.hpp"
#include "reline/replay_buffer.hpp"
#include "scripted_envs.hpp"

using namespace reline;

TEST_CASE("replay buffer ring semantics") {
    ReplayBuffer buf(3);
    CHECK(buf.size() == 0);
    buf.push({Tensor({1}, {1.0}), 0, Tensor({1}, {1.0}), 1.0, false});
    CHECK(buf.size() == 1);
    for (double r : {2.0, 3.0, 4.0})
        buf.push({Tensor({1}, {r}), 0, Tensor({1}, {r}), r, false});
    CHECK(buf.size() == 3);
    CHECK(buf.at(0).reward == 2.0);  // push 1 evicted
    CHECK(buf.at(1).reward == 3.0);
    CHECK(buf.at(2).reward == 4.0);

    ReplayBuffer big(10000);
    for (int i = 0; i < 10000; ++i) big.push({Tensor({1}, {0.0}), 0, Tensor({1}, {0.0}), 0.0, false});
    DqnConfig cfg;
    CHECK(big.size() >= cfg.min_buffer_before_training);  // training gate opens
}

TEST_CASE("replay sampling is uniform within 3-sigma binomial bounds") {
    ReplayBuffer buf(10);
    for (int i = 0; i < 10; ++i)
        buf.push({Tensor({1}, {static_cast<double>(i)}), 0, Tensor({1}, {0.0}), static_cast<double>(i),
                  false});
    Rng rng(123);
    const int draws = 50000;
    std::vector<int> counts(10, 0);
    for (int d = 0; d < draws / 10; ++d)
        for (const auto* e : buf.sample(10, rng)) ++counts[static_cast<size_t>(e->reward)];
    double p = 0.1, mean = draws * p, sigma = std::sqrt(draws * p * (1 - p));
    for (int c : counts) CHECK(std::fabs(c - mean) < 3.0 * sigma);
}

TEST_CASE("elite selection") {
    CHECK(elite_count(16, 0.70) == 11);
    CHECK(elite_count(4, 0.70) == 3);
    CHECK(elite_count(1, 0.01) == 1);  // floor at one elite

    std::vector<double> equal(16, 7.5);
    auto elites = select_elites(equal, 11);
    REQUIRE(elites.size() == 11);
    for (int i = 0; i < 11; ++i) CHECK(elites[static_cast<size_t>(i)] == i);  // stable tie-break

    std::vector<double> rewards = {5, 9, 1, 7};
    CHECK(select_elites(rewards, 2) == std::vector<int>{1, 3});

    // positive affine reward transforms keep the same elite set
    std::vector<double> scaled;
    for (double r : rewards) scaled.push_back(3.0 * r + 11.0);
    CHECK(select_elites(scaled, 2) == select_elites(rewards, 2));
}

TEST_CASE("cross-entropy learns a scripted dominant action") {
    testutil::SurvivalEnv env;
    CrossEntropyConfig cfg;
    cfg.batch_episodes = 16;
    cfg.elite_fraction = 0.70;
    cfg.learning_rate = 0.05;
    cfg.hidden_units = 16;
    cfg.max_training_episodes = 480;
    cfg.train_epochs = 6;
    CrossEntropyAgent agent(env.spec(), cfg, 5);
    RewardConfig rc;
    auto traces = agent.train(env, GameKind::Cartpole, rc, 41);
    CHECK(traces.size() == 480);

    GameObservation obs = env.reset(0);
    Tensor probs = nn::softmax(agent.net().forward(obs.values));
    CHECK(probs[0] > 0.9);
    CHECK(agent.act_greedy(obs) == 0);
}

TEST_CASE("dqn action selection") {
    nn::NetworkSpec spec;
    spec.layers = {nn::LayerSpec::dense(1, 3)};
    nn::Network net(spec);
    net.params().weights[0].data = {0.0, 0.0, 0.0};
    net.params().biases[0].data = {0.1, 0.9, 0.3};
    Rng rng(1);
    Tensor obs({1}, {1.0});
    CHECK(dqn_select_action(net, obs, 0.0, rng) == 1);

    net.params().biases[0].data = {0.5, 0.5, 0.2};
    CHECK(dqn_select_action(net, obs, 0.0, rng) == 0);  // lowest index wins ties

    std::vector<int> freq(3, 0);
    for (int i = 0; i < 9000; ++i) ++freq[static_cast<size_t>(dqn_select_action(net, obs, 1.0, rng))];
    for (int c : freq) CHECK(std::fabs(c - 3000.0) < 3.0 * std::sqrt(9000.0 * (1.0 / 3.0) * (2.0 / 3.0)));
}

TEST_CASE("epsilon schedule is linear then flat") {
    DqnConfig cfg;
    cfg.eps_start = 1.0;
    cfg.eps_end = 0.05;
    cfg.eps_decay_fraction = 0.5;
    cfg.max_training_episodes = 100;
    CHECK(epsilon_for_episode(cfg, 0) == 1.0);
    CHECK(epsilon_for_episode(cfg, 25) == doctest::Approx(0.525));
    CHECK(epsilon_for_episode(cfg, 50) == doctest::Approx(0.05));
    CHECK(epsilon_for_episode(cfg, 99) == doctest::Approx(0.05));
}

TEST_CASE("dqn regression targets") {
    nn::NetworkSpec spec;
    spec.layers = {nn::LayerSpec::dense(1, 2)};
    spec.init_seed = 2;
    nn::Network net(spec), target = net;
    DqnConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.gamma = 0.99;

    // terminal transition: target is exactly r, so repeated updates converge to 5
    ExperienceInstance terminal{Tensor({1}, {1.0}), 0, Tensor({1}, {1.0}), 5.0, true};
    for (int i = 0; i < 400; ++i) dqn_update(net, target, {&terminal}, cfg);
    CHECK(net.forward(terminal.prev_state)[0] == doctest::Approx(5.0).epsilon(1e-3));

    // gamma = 0 reduces every target to the immediate reward
    nn::Network net2(spec), target2 = net2;
    DqnConfig g0 = cfg;
    g0.gamma = 0.0;
    ExperienceInstance nonterminal{Tensor({1}, {1.0}), 1, Tensor({1}, {1.0}), 3.0, false};
    for (int i = 0; i < 400; ++i) dqn_update(net2, target2, {&nonterminal}, g0);
    CHECK(net2.forward(nonterminal.prev_state)[1] == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("dqn reaches the value-iteration fixed point on a tiny mdp") {
    // oracle: Q*(s,a) = r(s,a) + gamma * max_a' Q*(a, a')
    const double gamma = 0.9;
    double q[2][2] = {};
    for (int it = 0; it < 500; ++it) {
        double next[2][2];
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a)
                next[s][a] = testutil::TinyMdpEnv::kReward[s][a] + gamma * std::max(q[a][0], q[a][1]);
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) q[s][a] = next[s][a];
    }
    CHECK(q[0][1] == doctest::Approx(18.0));
    CHECK(q[1][1] == doctest::Approx(20.0));

    testutil::TinyMdpEnv env;
    DqnConfig cfg;
    cfg.gamma = gamma;
    cfg.batch_size = 16;
    cfg.learning_rate = 5e-3;
    cfg.eps_start = 1.0;
    cfg.eps_end = 0.5;  // keep exploring: all four (s,a) pairs must stay in the buffer
    cfg.eps_decay_fraction = 0.3;
    cfg.target_sync_interval = 200;
    cfg.replay_capacity = 4000;
    cfg.min_buffer_before_training = 200;
    cfg.update_interval = 1;
    cfg.max_training_episodes = 700;
    cfg.dense_hidden = 32;
    DqnAgent agent(env.spec(), cfg, 11);
    RewardConfig rc;
    agent.train(env, GameKind::Race, rc, 29);

    for (int s = 0; s < 2; ++s) {
        Tensor obs({2}, {s == 0 ? 1.0 : 0.0, s == 1 ? 1.0 : 0.0});
        Tensor qs = agent.net().forward(obs);
        for (int a = 0; a < 2; ++a) CHECK(qs[a] == doctest::Approx(q[s][a]).epsilon(0.05));
    }
    GameObservation o0 = env.reset(0);
    CHECK(agent.act_greedy(o0) == 1);  // optimal policy hops to state 1 and stays
}

TEST_CASE("random agent uniformity and determinism") {
    EnvSpec two;
    two.action_count = 2;
    Rng rng(9);
    int ones = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ones += random_agent_act(two, rng);
    CHECK(std::fabs(ones / static_cast<double>(draws) - 0.5) < 0.01);

    Rng a(4), b(4);
    for (int i = 0; i < 100; ++i) CHECK(random_agent_act(two, a) == random_agent_act(two, b));

    EnvSpec five;
    five.action_count = 5;
    std::set<int> seen;
    Rng r5(2);
    for (int i = 0; i < 200; ++i) seen.insert(random_agent_act(five, r5));
    CHECK(seen == std::set<int>{0, 1, 2, 3, 4});
}
