#include "reline/config.hpp"

#include <fstream>

#include "reline/cartpole.hpp"
#include "reline/dotmaze.hpp"
#include "reline/racesim.hpp"
#include "reline/remote_env.hpp"

namespace reline {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

const nlohmann::json& require_key(const nlohmann::json& j, const std::string& path, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing required field");
    return j[key];
}

RenderCostField parse_cost_field(const nlohmann::json& j, const std::string& path) {
    RenderCostField f;
    f.base_cost_ms = j.value("base_cost_ms", f.base_cost_ms);
    f.noise_stddev_ms = j.value("noise_stddev_ms", f.noise_stddev_ms);
    if (j.contains("hotspots")) {
        for (const auto& h : j["hotspots"]) {
            Hotspot hs;
            hs.cx = require_key(h, path + ".hotspots[]", "x").get<double>();
            hs.cy = require_key(h, path + ".hotspots[]", "y").get<double>();
            hs.peak_ms = require_key(h, path + ".hotspots[]", "peak_ms").get<double>();
            hs.radius = h.value("radius", 1.0);
            if (hs.peak_ms <= 0 || hs.radius <= 0) fail(path + ".hotspots[]", "peak_ms and radius must be positive");
            f.hotspots.push_back(hs);
        }
    }
    return f;
}

nlohmann::ordered_json cost_field_to_json(const RenderCostField& f) {
    nlohmann::ordered_json j;
    j["base_cost_ms"] = f.base_cost_ms;
    j["noise_stddev_ms"] = f.noise_stddev_ms;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& h : f.hotspots)
        arr.push_back({{"x", h.cx}, {"y", h.cy}, {"peak_ms", h.peak_ms}, {"radius", h.radius}});
    j["hotspots"] = arr;
    return j;
}

}  // namespace

std::unique_ptr<Environment> make_env(const EnvConfig& cfg) {
    const auto& p = cfg.params;
    if (cfg.name == "cartpole-bug") {
        CartPoleConfig c;
        c.max_episode_steps = p.value("max_episode_steps", c.max_episode_steps);
        if (p.contains("cost_field")) c.cost_field = parse_cost_field(p["cost_field"], "env.params.cost_field");
        if (p.contains("bug_zones")) {
            c.bug_zones.clear();
            for (const auto& z : p["bug_zones"])
                c.bug_zones.push_back({z.at("id").get<std::string>(), z.at("lo").get<double>(),
                                       z.at("hi").get<double>(), false});
        }
        return std::make_unique<CartPoleEnv>(c);
    }
    if (cfg.name == "dotmaze") {
        DotMazeConfig c;
        c.max_episode_steps = p.value("max_episode_steps", c.max_episode_steps);
        c.ghost_count = p.value("ghost_count", c.ghost_count);
        if (p.contains("layout")) c.layout = p["layout"].get<std::vector<std::string>>();
        if (p.contains("cost_field")) c.cost_field = parse_cost_field(p["cost_field"], "env.params.cost_field");
        return std::make_unique<DotMazeEnv>(c);
    }
    if (cfg.name == "racesim") {
        RaceSimConfig c;
        c.track_length = p.value("track_length", c.track_length);
        c.max_episode_steps = p.value("max_episode_steps", c.max_episode_steps);
        c.stuck_steps = p.value("stuck_steps", c.stuck_steps);
        c.centering_norm = p.value("centering_norm", c.centering_norm);
        c.max_speed = p.value("max_speed", c.max_speed);
        if (p.contains("cost_field")) c.cost_field = parse_cost_field(p["cost_field"], "env.params.cost_field");
        return std::make_unique<RaceSimEnv>(c);
    }
    if (cfg.name == "remote") {
        std::string host = p.value("host", std::string("127.0.0.1"));
        int port = p.value("port", 0);
        int timeout_ms = p.value("timeout_ms", 5000);
        if (port <= 0) fail("env.params.port", "remote env needs a positive port");
        return std::make_unique<adapter::RemoteEnv>(adapter::connect_tcp(host, port, timeout_ms), timeout_ms);
    }
    fail("env.name", "unknown environment '" + cfg.name + "'");
}

RunConfig parse_run_config(const nlohmann::json& j) {
    RunConfig c;
    const auto& env = require_key(j, "", "env");
    c.env.name = require_key(env, "env", "name").get<std::string>();
    c.env.params = env.value("params", nlohmann::json::object());

    const auto& agent = require_key(j, "", "agent");
    c.agent.kind = require_key(agent, "agent", "kind").get<std::string>();
    if (c.agent.kind != "cross-entropy" && c.agent.kind != "dqn" && c.agent.kind != "random")
        fail("agent.kind", "unknown agent kind '" + c.agent.kind + "'");
    c.agent.eval_sample = agent.value("eval_sample", false);
    if (agent.contains("cross_entropy")) {
        const auto& ce = agent["cross_entropy"];
        c.agent.ce.batch_episodes = ce.value("batch_episodes", c.agent.ce.batch_episodes);
        c.agent.ce.elite_fraction = ce.value("elite_fraction", c.agent.ce.elite_fraction);
        c.agent.ce.learning_rate = ce.value("learning_rate", c.agent.ce.learning_rate);
        c.agent.ce.momentum = ce.value("momentum", c.agent.ce.momentum);
        c.agent.ce.hidden_units = ce.value("hidden_units", c.agent.ce.hidden_units);
        c.agent.ce.sgd_minibatch = ce.value("sgd_minibatch", c.agent.ce.sgd_minibatch);
        c.agent.ce.train_epochs = ce.value("train_epochs", c.agent.ce.train_epochs);
        c.agent.ce.elite_pool = ce.value("elite_pool", c.agent.ce.elite_pool);
        c.agent.ce.explore_eps = ce.value("explore_eps", c.agent.ce.explore_eps);
        if (c.agent.ce.elite_fraction <= 0.0 || c.agent.ce.elite_fraction > 1.0)
            fail("agent.cross_entropy.elite_fraction", "must lie in (0, 1]");
    }
    if (agent.contains("dqn")) {
        const auto& d = agent["dqn"];
        c.agent.dqn.gamma = d.value("gamma", c.agent.dqn.gamma);
        c.agent.dqn.batch_size = d.value("batch_size", c.agent.dqn.batch_size);
        c.agent.dqn.learning_rate = d.value("learning_rate", c.agent.dqn.learning_rate);
        c.agent.dqn.eps_start = d.value("eps_start", c.agent.dqn.eps_start);
        c.agent.dqn.eps_end = d.value("eps_end", c.agent.dqn.eps_end);
        c.agent.dqn.eps_decay_fraction = d.value("eps_decay_fraction", c.agent.dqn.eps_decay_fraction);
        c.agent.dqn.target_sync_interval = d.value("target_sync_interval", c.agent.dqn.target_sync_interval);
        c.agent.dqn.replay_capacity = d.value("replay_capacity", c.agent.dqn.replay_capacity);
        c.agent.dqn.min_buffer_before_training = d.value("min_buffer_before_training",
                                                         c.agent.dqn.min_buffer_before_training);
        c.agent.dqn.update_interval = d.value("update_interval", c.agent.dqn.update_interval);
        c.agent.dqn.dense_hidden = d.value("dense_hidden", c.agent.dqn.dense_hidden);
        if (c.agent.dqn.gamma < 0.0 || c.agent.dqn.gamma >= 1.0) fail("agent.dqn.gamma", "must lie in [0, 1)");
        if (c.agent.dqn.eps_start < 0.0 || c.agent.dqn.eps_start > 1.0 || c.agent.dqn.eps_end < 0.0 ||
            c.agent.dqn.eps_end > 1.0)
            fail("agent.dqn.epsilon", "schedule must stay in [0, 1]");
    }

    const auto& reward = require_key(j, "", "reward");
    std::string mode = require_key(reward, "reward", "mode").get<std::string>();
    if (mode == "baseline") c.reward.mode = RewardMode::Baseline;
    else if (mode == "reline") c.reward.mode = RewardMode::Reline;
    else fail("reward.mode", "must be 'baseline' or 'reline'");
    c.reward.centering_limit = reward.value("theta", c.reward.centering_limit);
    c.reward.progress_cap = reward.value("M", c.reward.progress_cap);
    c.reward.finish_bonus_fixed = reward.value("finish_bonus_fixed", c.reward.finish_bonus_fixed);
    c.reward.perf_reward_value = reward.value("perf_reward_value", c.reward.perf_reward_value);
    c.reward.perf_bonus_multiplier = reward.value("perf_bonus_multiplier", c.reward.perf_bonus_multiplier);
    c.reward.bug_reward_value = reward.value("bug_reward_value", c.reward.bug_reward_value);
    if (reward.contains("t")) {
        if (reward["t"].is_string() && reward["t"].get<std::string>() == "auto") c.auto_threshold = true;
        else if (reward["t"].is_number()) c.reward.low_fps_threshold_ms = reward["t"].get<double>();
        else fail("reward.t", "must be a number or 'auto'");
    } else if (c.reward.mode == RewardMode::Reline && c.env.name == "racesim") {
        fail("reward.t", "reline mode needs an explicit t or t='auto'");
    }
    std::string bonus = reward.value("bonus", c.reward.mode == RewardMode::Reline ? "proportional" : "fixed");
    if (bonus == "fixed") c.reward.bonus_mode = BonusMode::Fixed;
    else if (bonus == "proportional") c.reward.bonus_mode = BonusMode::Proportional;
    else fail("reward.bonus", "must be 'fixed' or 'proportional'");

    const auto& study = require_key(j, "", "study");
    c.study.training_episodes = study.value("training_episodes", c.study.training_episodes);
    c.study.evaluation_episodes = study.value("evaluation_episodes", c.study.evaluation_episodes);
    c.study.repeats = study.value("repeats", c.study.repeats);
    c.study.master_seed = study.value("master_seed", c.study.master_seed);
    c.study.calib_reference_episodes = study.value("calib_reference_episodes", c.study.calib_reference_episodes);
    c.study.calib_warmup_episodes = study.value("calib_warmup_episodes", c.study.calib_warmup_episodes);
    if (c.study.repeats < 1) fail("study.repeats", "must be >= 1");

    if (j.contains("bins")) {
        c.bins.x_width = j["bins"].value("x_width", 1.0);
        c.bins.y_width = j["bins"].value("y_width", 1.0);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    return c;
}

nlohmann::ordered_json run_config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["env"] = {{"name", c.env.name}, {"params", c.env.params}};
    nlohmann::ordered_json agent;
    agent["kind"] = c.agent.kind;
    agent["eval_sample"] = c.agent.eval_sample;
    agent["cross_entropy"] = {{"batch_episodes", c.agent.ce.batch_episodes},
                              {"elite_fraction", c.agent.ce.elite_fraction},
                              {"learning_rate", c.agent.ce.learning_rate},
                              {"momentum", c.agent.ce.momentum},
                              {"hidden_units", c.agent.ce.hidden_units},
                              {"sgd_minibatch", c.agent.ce.sgd_minibatch},
                              {"train_epochs", c.agent.ce.train_epochs},
                              {"elite_pool", c.agent.ce.elite_pool},
                              {"explore_eps", c.agent.ce.explore_eps}};
    agent["dqn"] = {{"gamma", c.agent.dqn.gamma},
                    {"batch_size", c.agent.dqn.batch_size},
                    {"learning_rate", c.agent.dqn.learning_rate},
                    {"eps_start", c.agent.dqn.eps_start},
                    {"eps_end", c.agent.dqn.eps_end},
                    {"eps_decay_fraction", c.agent.dqn.eps_decay_fraction},
                    {"target_sync_interval", c.agent.dqn.target_sync_interval},
                    {"replay_capacity", c.agent.dqn.replay_capacity},
                    {"min_buffer_before_training", c.agent.dqn.min_buffer_before_training},
                    {"update_interval", c.agent.dqn.update_interval},
                    {"dense_hidden", c.agent.dqn.dense_hidden}};
    j["agent"] = agent;
    nlohmann::ordered_json reward;
    reward["mode"] = c.reward.mode == RewardMode::Reline ? "reline" : "baseline";
    reward["theta"] = c.reward.centering_limit;
    reward["M"] = c.reward.progress_cap;
    if (c.auto_threshold) reward["t"] = "auto";
    else reward["t"] = c.reward.low_fps_threshold_ms;
    reward["bonus"] = c.reward.bonus_mode == BonusMode::Proportional ? "proportional" : "fixed";
    reward["finish_bonus_fixed"] = c.reward.finish_bonus_fixed;
    reward["perf_reward_value"] = c.reward.perf_reward_value;
    reward["perf_bonus_multiplier"] = c.reward.perf_bonus_multiplier;
    reward["bug_reward_value"] = c.reward.bug_reward_value;
    j["reward"] = reward;
    j["study"] = {{"training_episodes", c.study.training_episodes},
                  {"evaluation_episodes", c.study.evaluation_episodes},
                  {"repeats", c.study.repeats},
                  {"master_seed", c.study.master_seed},
                  {"calib_reference_episodes", c.study.calib_reference_episodes},
                  {"calib_warmup_episodes", c.study.calib_warmup_episodes}};
    j["bins"] = {{"x_width", c.bins.x_width}, {"y_width", c.bins.y_width}};
    j["output_dir"] = c.output_dir;
    return j;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: parse error in ") + path + ": " + e.what());
    }
    return parse_run_config(j);
}

static nlohmann::json race_desk_cost_field() {
    // >= 8 hotspots reachable only off the center racing line, plus two just
    // past the start line that even an aimless agent stumbles into
    return {{"base_cost_ms", 10.0},
            {"noise_stddev_ms", 0.3},
            {"hotspots",
             {{{"x", 6.0}, {"y", 3.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", -6.0}, {"y", 5.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", 12.0}, {"y", 15.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", -14.0}, {"y", 25.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", 16.0}, {"y", 38.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", -12.0}, {"y", 52.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", 14.0}, {"y", 64.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", -16.0}, {"y", 76.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", 10.0}, {"y", 88.0}, {"peak_ms", 30.0}, {"radius", 3.0}},
              {{"x", -8.0}, {"y", 96.0}, {"peak_ms", 30.0}, {"radius", 3.0}}}}};
}

RunConfig preset_config(const std::string& name) {
    nlohmann::json j;
    auto base = [&](const char* env, const char* agent, const char* mode, int train, int eval) {
        j = {{"env", {{"name", env}, {"params", nlohmann::json::object()}}},
             {"agent", {{"kind", agent}}},
             {"reward", {{"mode", mode}}},
             {"study", {{"training_episodes", train}, {"evaluation_episodes", eval}}}};
    };
    if (name == "cartpole-paper") {
        base("cartpole-bug", "cross-entropy", "reline", 3200, 1000);
        j["study"]["repeats"] = 10;
    } else if (name == "cartpole-desk") {
        base("cartpole-bug", "cross-entropy", "reline", 480, 1000);
        // shortened episodes plus an elite replay pool keep the bug bonus
        // competitive with survival reward at this budget
        j["env"]["params"]["max_episode_steps"] = 400;
        j["agent"]["cross_entropy"] = {{"batch_episodes", 32}, {"learning_rate", 0.03},
                                       {"train_epochs", 6},   {"hidden_units", 64},
                                       {"elite_pool", 4}};
        j["agent"]["eval_sample"] = true;
    } else if (name == "dotmaze-paper") {
        base("dotmaze", "dqn", "reline", 1000, 1000);
        j["study"]["repeats"] = 10;
    } else if (name == "dotmaze-desk") {
        base("dotmaze", "dqn", "reline", 400, 300);
        j["agent"]["dqn"] = {{"min_buffer_before_training", 2000}, {"target_sync_interval", 500}};
        j["agent"]["eval_sample"] = true;
    } else if (name == "race-paper") {
        base("racesim", "dqn", "reline", 2300, 1000);
        j["reward"]["t"] = "auto";
        j["reward"]["theta"] = 20.0;
        j["reward"]["M"] = 10.0;
        j["study"]["repeats"] = 10;
        j["env"]["params"]["cost_field"] = race_desk_cost_field();
    } else if (name == "race-desk") {
        base("racesim", "dqn", "reline", 500, 300);
        j["reward"]["t"] = "auto";
        j["reward"]["theta"] = 20.0;
        j["reward"]["M"] = 10.0;
        j["agent"]["dqn"] = {{"min_buffer_before_training", 2000}, {"target_sync_interval", 500},
                             {"eps_decay_fraction", 0.5}};
        j["agent"]["eval_sample"] = true;
        j["env"]["params"]["cost_field"] = race_desk_cost_field();
        j["study"]["calib_reference_episodes"] = 100;
        j["study"]["calib_warmup_episodes"] = 50;
    } else {
        throw ConfigError("config: unknown preset '" + name + "'");
    }
    return parse_run_config(j);
}

}  // namespace reline
