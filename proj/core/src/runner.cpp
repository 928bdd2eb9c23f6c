#include "reline/runner.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "reline/random_agent.hpp"

namespace reline::run {

namespace fs = std::filesystem;

Policy make_policy(const TrainedAgent& agent, const AgentConfig& acfg, uint64_t seed) {
    if (agent.kind == "random") {
        auto rng = std::make_shared<Rng>(seed);
        EnvSpec spec = agent.env_spec;
        return [rng, spec](const GameObservation& obs) {
            (void)obs;
            Rng& r = *rng;
            return random_agent_act(spec, r);
        };
    }
    if (agent.kind == "cross-entropy") {
        if (!agent.ce) throw RunnerError("runner: cross-entropy agent has no network");
        if (acfg.eval_sample) {
            auto rng = std::make_shared<Rng>(seed);
            const CrossEntropyAgent* ce = &*agent.ce;
            return [ce, rng](const GameObservation& obs) { return ce->act_sample(obs, *rng); };
        }
        const CrossEntropyAgent* ce = &*agent.ce;
        return [ce](const GameObservation& obs) { return ce->act_greedy(obs); };
    }
    if (agent.kind == "dqn") {
        if (!agent.dqn) throw RunnerError("runner: dqn agent has no network");
        const DqnAgent* dq = &*agent.dqn;
        if (acfg.eval_sample) {
            // evaluate with the training-time floor so the policy is not
            // brittle at states it only ever left via exploration noise
            auto rng = std::make_shared<Rng>(seed);
            double eps = dq->config().eps_end;
            return [dq, rng, eps](const GameObservation& obs) {
                return dqn_select_action(dq->net(), obs.values, eps, *rng);
            };
        }
        return [dq](const GameObservation& obs) { return dq->act_greedy(obs); };
    }
    throw RunnerError("runner: unknown agent kind '" + agent.kind + "'");
}

TrainOutput train_agent(const RunConfig& cfg, Environment& env) {
    TrainOutput out;
    out.agent.kind = cfg.agent.kind;
    out.agent.env_spec = env.spec();
    GameKind kind = game_kind_for(env.spec());
    uint64_t agent_seed = derive_seed(cfg.study.master_seed, "agent-init", 0);

    if (cfg.agent.kind == "random") return out;  // nothing to train

    if (cfg.agent.kind == "cross-entropy") {
        CrossEntropyConfig ce = cfg.agent.ce;
        ce.max_training_episodes = cfg.study.training_episodes;
        out.agent.ce.emplace(env.spec(), ce, agent_seed);
        out.traces = out.agent.ce->train(env, kind, cfg.reward, cfg.study.master_seed);
        return out;
    }
    if (cfg.agent.kind == "dqn") {
        DqnConfig dq = cfg.agent.dqn;
        dq.max_training_episodes = cfg.study.training_episodes;
        out.agent.dqn.emplace(env.spec(), dq, agent_seed);
        out.traces = out.agent.dqn->train(env, kind, cfg.reward, cfg.study.master_seed);
        return out;
    }
    throw RunnerError("runner: unknown agent kind '" + cfg.agent.kind + "'");
}

static std::string spec_line(const EnvSpec& s) {
    std::ostringstream os;
    os << s.name << ' ' << s.action_count;
    for (int d : s.observation_shape) os << ' ' << d;
    return os.str();
}

void save_agent(const TrainedAgent& agent, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw RunnerError("runner: cannot write checkpoint " + path);
    os << "reline-agent v1\n";
    os << "kind " << agent.kind << '\n';
    os << "env " << spec_line(agent.env_spec) << '\n';
    if (agent.kind == "cross-entropy") agent.ce->net().save(os);
    else if (agent.kind == "dqn") agent.dqn->net().save(os);
}

TrainedAgent load_agent(const std::string& path, const AgentConfig& acfg, const EnvSpec& expected_spec) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw RunnerError("runner: cannot open checkpoint " + path);
    std::string magic, key;
    std::getline(is, magic);
    if (magic != "reline-agent v1") throw RunnerError("runner: bad checkpoint header in " + path);

    TrainedAgent agent;
    is >> key >> agent.kind;
    if (key != "kind") throw RunnerError("runner: malformed checkpoint " + path);
    is >> key >> agent.env_spec.name >> agent.env_spec.action_count;
    if (key != "env") throw RunnerError("runner: malformed checkpoint " + path);
    std::string rest;
    std::getline(is, rest);
    std::istringstream shape(rest);
    for (int d; shape >> d;) agent.env_spec.observation_shape.push_back(d);

    if (spec_line(agent.env_spec) != spec_line(expected_spec))
        throw RunnerError("runner: checkpoint " + path + " was trained for env '" +
                          spec_line(agent.env_spec) + "', run config expects '" +
                          spec_line(expected_spec) + "'");
    agent.env_spec = expected_spec;

    if (agent.kind == "cross-entropy") agent.ce.emplace(nn::Network::load(is), acfg.ce);
    else if (agent.kind == "dqn") agent.dqn.emplace(nn::Network::load(is), acfg.dqn);
    else if (agent.kind != "random") throw RunnerError("runner: unknown agent kind in checkpoint: " + agent.kind);
    return agent;
}

CalibrationResult run_calibration(const RunConfig& cfg, Environment& env, const Policy& baseline_policy) {
    GameKind kind = game_kind_for(env.spec());
    TimingDistribution reference = collect_reference(env, kind, cfg.reward, cfg.study.master_seed,
                                                     cfg.study.calib_reference_episodes, baseline_policy);
    TimingDistribution warmup = warmup_phase(env, kind, cfg.reward, cfg.study.master_seed,
                                             cfg.study.calib_warmup_episodes, baseline_policy);
    return calibrate(reference, warmup);
}

static nlohmann::ordered_json summary_json(const DistributionSummary& s) {
    return {{"mean", s.mean}, {"sd", s.sd}, {"q1", s.q1}, {"q3", s.q3}, {"count", s.count}};
}

nlohmann::ordered_json calibration_to_json(const CalibrationResult& c) {
    return {{"t_b", c.t_b},
            {"delta", c.delta},
            {"t", c.t},
            {"reference", summary_json(c.reference_summary)},
            {"warmup", summary_json(c.warmup_summary)},
            {"negative_delta_warning", c.negative_delta_warning}};
}

static DistributionSummary summary_from_json(const nlohmann::json& j) {
    DistributionSummary s;
    s.mean = j.at("mean").get<double>();
    s.sd = j.at("sd").get<double>();
    s.q1 = j.at("q1").get<double>();
    s.q3 = j.at("q3").get<double>();
    s.count = j.at("count").get<size_t>();
    return s;
}

CalibrationResult calibration_from_json(const nlohmann::json& j) {
    CalibrationResult c;
    c.t_b = j.at("t_b").get<double>();
    c.delta = j.at("delta").get<double>();
    c.t = j.at("t").get<double>();
    c.reference_summary = summary_from_json(j.at("reference"));
    c.warmup_summary = summary_from_json(j.at("warmup"));
    c.negative_delta_warning = j.value("negative_delta_warning", false);
    return c;
}

long episodes_with_distinct_bugs(const std::vector<EpisodeTrace>& traces, size_t min_distinct) {
    long count = 0;
    for (const auto& t : traces) {
        std::set<std::string> ids(t.bug_ids_found.begin(), t.bug_ids_found.end());
        if (ids.size() >= min_distinct) ++count;
    }
    return count;
}

PolicyFactory make_policy_factory(const TrainedAgent& agent, const AgentConfig& acfg) {
    if (agent.kind == "random" || acfg.eval_sample) {
        // stochastic policies get a fresh seeded stream per episode
        return [&agent, acfg](uint64_t seed) { return make_policy(agent, acfg, seed); };
    }
    Policy shared = make_policy(agent, acfg, 0);
    return [shared](uint64_t) { return shared; };
}

LoadTestOutput run_loadtest(const RunConfig& cfg, Environment& env, const CalibrationResult& calib,
                            const std::vector<LoadTestInput>& agents, int jobs,
                            const EnvFactory& env_factory) {
    if (cfg.study.evaluation_episodes <= 0)
        throw RunnerError("runner: study.evaluation_episodes must be positive for a load test");
    if (jobs < 1) throw RunnerError("runner: jobs must be >= 1");
    if (jobs > 1 && !env_factory) throw RunnerError("runner: jobs > 1 needs an env factory");
    GameKind kind = game_kind_for(env.spec());
    RewardConfig rc = cfg.reward;
    double threshold = cfg.auto_threshold ? calib.t : rc.low_fps_threshold_ms;
    rc.low_fps_threshold_ms = threshold;

    LoadTestOutput out;
    std::vector<report::AgentArtifacts> rep_agents;
    for (const auto& in : agents) {
        EvalArtifacts art{in.name, {}, detect::PointSink(cfg.bins, threshold,
                                                         derive_seed(cfg.study.master_seed, "reservoir", 0)),
                          {}};
        int per_repeat = cfg.study.evaluation_episodes;
        size_t total = static_cast<size_t>(per_repeat) * cfg.study.repeats;
        art.traces.resize(total);

        auto episode_at = [&](Environment& e, size_t idx) {
            int r = static_cast<int>(idx) / per_repeat;
            uint64_t i = idx % static_cast<size_t>(per_repeat);
            std::string purpose = "eval-" + in.name + "-" + std::to_string(r);
            uint64_t env_seed = derive_seed(cfg.study.master_seed, purpose.c_str(), i);
            std::string policy_purpose = purpose + "-policy";
            Policy policy = in.factory(derive_seed(cfg.study.master_seed, policy_purpose.c_str(), i));
            art.traces[idx] = run_episode(e, kind, rc, env_seed, policy);
        };

        if (jobs == 1) {
            for (size_t idx = 0; idx < total; ++idx) episode_at(env, idx);
        } else {
            std::vector<std::thread> workers;
            for (int w = 0; w < jobs; ++w) {
                workers.emplace_back([&, w] {
                    auto local_env = env_factory();
                    for (size_t idx = static_cast<size_t>(w); idx < total; idx += static_cast<size_t>(jobs))
                        episode_at(*local_env, idx);
                });
            }
            for (auto& t : workers) t.join();
        }

        for (int r = 0; r < cfg.study.repeats; ++r) {
            std::vector<EpisodeTrace> slice(art.traces.begin() + static_cast<long>(r) * per_repeat,
                                            art.traces.begin() + static_cast<long>(r + 1) * per_repeat);
            art.per_repeat_bug_tallies.push_back(episodes_with_distinct_bugs(slice, 1));
        }
        for (size_t e = 0; e < art.traces.size(); ++e)
            for (const auto& s : art.traces[e].steps)
                art.sink.record(s.x, s.y, s.rt_ms, static_cast<long>(e));
        out.artifacts.push_back(std::move(art));
    }
    for (const auto& art : out.artifacts)
        rep_agents.push_back({art.name, &art.traces, &art.sink, &art.per_repeat_bug_tallies});

    RunConfig embedded = cfg;
    embedded.reward = rc;
    embedded.auto_threshold = false;  // the report pins the resolved value
    out.report = report::build_report(embedded, calib, rep_agents);
    return out;
}

std::string manifest_path(const std::string& dir) { return (fs::path(dir) / "manifest.json").string(); }
std::string checkpoint_path(const std::string& dir) { return (fs::path(dir) / "checkpoint.txt").string(); }
std::string calibration_path(const std::string& dir) { return (fs::path(dir) / "calibration.json").string(); }
std::string report_path(const std::string& dir) { return (fs::path(dir) / "report.json").string(); }
std::string training_traces_path(const std::string& dir) {
    return (fs::path(dir) / "traces" / "training.jsonl").string();
}
std::string eval_traces_path(const std::string& dir, const std::string& agent_name) {
    return (fs::path(dir) / "traces" / ("eval_" + agent_name + ".jsonl")).string();
}

void write_train_artifacts(const RunConfig& cfg, const TrainOutput& out, const std::string& dir) {
    fs::create_directories(fs::path(dir) / "traces");
    {
        std::ofstream os(manifest_path(dir), std::ios::binary);
        if (!os) throw RunnerError("runner: cannot write manifest in " + dir);
        os << run_config_to_json(cfg).dump(2) << '\n';
    }
    save_agent(out.agent, checkpoint_path(dir));
    write_traces(training_traces_path(dir), out.traces);
}

void write_loadtest_artifacts(const LoadTestOutput& out, const std::string& dir) {
    fs::create_directories(fs::path(dir) / "traces");
    report::write_report(report_path(dir), out.report);
    for (const auto& art : out.artifacts) write_traces(eval_traces_path(dir, art.name), art.traces);
    report::export_plot_data(out.report, (fs::path(dir) / "exports").string());
}

}  // namespace reline::run
