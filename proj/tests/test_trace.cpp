#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "reline/cartpole.hpp"
#include "reline/random_agent.hpp"
#include "reline/report.hpp"
#include "reline/rollout.hpp"
#include "reline/runner.hpp"

using namespace reline;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("reline-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

Policy seeded_random_policy(const EnvSpec& spec, uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    return [rng, spec](const GameObservation&) { return random_agent_act(spec, *rng); };
}

}  // namespace

TEST_CASE("observation digest is sensitive to values and deterministic") {
    GameObservation a{Tensor({2}, {1.0, 2.0}), 1};
    GameObservation b{Tensor({2}, {1.0, 2.0}), 1};
    GameObservation c{Tensor({2}, {1.0, 2.000001}), 1};
    CHECK(observation_digest(a) == observation_digest(b));
    CHECK(observation_digest(a) != observation_digest(c));
}

TEST_CASE("rollouts: counting, determinism, and reward bookkeeping") {
    CartPoleEnv env;
    RewardConfig rc;
    rc.mode = RewardMode::Reline;
    Policy policy = seeded_random_policy(env.spec(), 7);

    CHECK(run_episodes(env, GameKind::Cartpole, rc, 1, "t", 0, policy).empty());

    auto a = run_episodes(env, GameKind::Cartpole, rc, 1, "t", 5, seeded_random_policy(env.spec(), 7));
    auto b = run_episodes(env, GameKind::Cartpole, rc, 1, "t", 5, seeded_random_policy(env.spec(), 7));
    REQUIRE(a.size() == 5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(a[i].env_seed == b[i].env_seed);
        CHECK(a[i].steps.size() == b[i].steps.size());
        CHECK(a[i].total_reward() == b[i].total_reward());
    }
    for (const auto& t : a) {
        double game = 0.0, perf = 0.0, bonus = 0.0;
        for (const auto& s : t.steps) {
            game += s.game;
            perf += s.perf;
            bonus += s.bonus;
        }
        CHECK(t.total_game_reward == game);  // totals are per-step sums
        CHECK(t.total_perf_reward == perf);
        CHECK(t.total_bonus == bonus);
    }
}

TEST_CASE("bug-count tallies over evaluation episodes") {
    std::vector<EpisodeTrace> traces(4);
    traces[0].bug_ids_found = {"bug-left"};
    traces[1].bug_ids_found = {"bug-left", "bug-right"};
    traces[2].bug_ids_found = {"bug-right", "bug-right"};  // one distinct zone
    CHECK(run::episodes_with_distinct_bugs(traces, 1) == 3);
    CHECK(run::episodes_with_distinct_bugs(traces, 2) == 1);
}

TEST_CASE("traces round-trip through json lines") {
    TempDir tmp;
    CartPoleEnv env;
    RewardConfig rc;
    rc.mode = RewardMode::Reline;
    auto traces = run_episodes(env, GameKind::Cartpole, rc, 3, "rt", 4, seeded_random_policy(env.spec(), 3));
    std::string path = (tmp.path / "traces.jsonl").string();
    write_traces(path, traces);
    auto back = read_traces(path);
    REQUIRE(back.size() == traces.size());
    for (size_t i = 0; i < traces.size(); ++i) {
        CHECK(back[i].env_seed == traces[i].env_seed);
        CHECK(back[i].bug_ids_found == traces[i].bug_ids_found);
        CHECK(back[i].finished == traces[i].finished);
        REQUIRE(back[i].steps.size() == traces[i].steps.size());
        for (size_t s = 0; s < traces[i].steps.size(); ++s) {
            CHECK(back[i].steps[s].obs_digest == traces[i].steps[s].obs_digest);
            CHECK(back[i].steps[s].action == traces[i].steps[s].action);
            CHECK(back[i].steps[s].rt_ms == traces[i].steps[s].rt_ms);  // bit-exact doubles
            CHECK(back[i].steps[s].game == traces[i].steps[s].game);
        }
    }
}

TEST_CASE("replay verification: exact match and tamper detection") {
    CartPoleEnv env;
    RewardConfig rc;
    rc.mode = RewardMode::Reline;
    auto trace = run_episode(env, GameKind::Cartpole, rc, 99, seeded_random_policy(env.spec(), 99));

    auto ok = report::replay_trace(trace, env, GameKind::Cartpole, rc);
    CHECK(ok.matched);

    EpisodeTrace tampered = trace;
    tampered.steps[3].game += 1.0;
    auto bad = report::replay_trace(tampered, env, GameKind::Cartpole, rc);
    CHECK_FALSE(bad.matched);
    CHECK(bad.divergence_step == 3);
    CHECK(bad.field == "game");
    CHECK(bad.expected == tampered.steps[3].game);

    EpisodeTrace wrong_action = trace;
    wrong_action.steps[0].action = 1 - wrong_action.steps[0].action;
    auto div = report::replay_trace(wrong_action, env, GameKind::Cartpole, rc);
    CHECK_FALSE(div.matched);  // trajectory diverges somewhere downstream
}
