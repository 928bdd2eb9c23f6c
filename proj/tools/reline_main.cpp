// Load-testing CLI: train agents, calibrate the low-FPS threshold, run load
// tests, compare agents, re-export reports, and verify replay traces.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 contract violation.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "reline/config.hpp"
#include "reline/protocol.hpp"
#include "reline/report.hpp"
#include "reline/runner.hpp"

namespace fs = std::filesystem;
using namespace reline;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitContract = 3;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string output = "reline-out";
    int64_t master_seed = -1;
    int training_episodes = -1;
    int evaluation_episodes = -1;
    int repeats = -1;
    std::string agent_kind;
    std::string reward_mode;
    double threshold = -1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    auto* cfg = cmd->add_option("-c,--config", o.config_path, "run config file (JSON)");
    auto* preset = cmd->add_option("-p,--preset", o.preset,
                                   "named preset: {cartpole,dotmaze,race}-{paper,desk}");
    cfg->excludes(preset);
    cmd->add_option("-o,--output", o.output, "output directory");
    cmd->add_option("--master-seed", o.master_seed, "override study.master_seed");
    cmd->add_option("--training-episodes", o.training_episodes, "override study.training_episodes");
    cmd->add_option("--evaluation-episodes", o.evaluation_episodes, "override study.evaluation_episodes");
    cmd->add_option("--repeats", o.repeats, "override study.repeats");
    cmd->add_option("--agent", o.agent_kind, "override agent.kind");
    cmd->add_option("--reward-mode", o.reward_mode, "override reward.mode (baseline|reline)");
    cmd->add_option("--threshold", o.threshold, "override reward.t (milliseconds)");
}

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.preset.empty()) cfg = preset_config(o.preset);
    else if (!o.config_path.empty()) cfg = load_run_config(o.config_path);
    else throw ConfigError("config: pass --config or --preset");
    if (o.master_seed >= 0) cfg.study.master_seed = static_cast<uint64_t>(o.master_seed);
    if (o.training_episodes >= 0) cfg.study.training_episodes = o.training_episodes;
    if (o.evaluation_episodes >= 0) cfg.study.evaluation_episodes = o.evaluation_episodes;
    if (o.repeats >= 0) cfg.study.repeats = o.repeats;
    if (!o.agent_kind.empty()) {
        if (o.agent_kind != "cross-entropy" && o.agent_kind != "dqn" && o.agent_kind != "random")
            throw ConfigError("config: agent.kind: unknown agent kind '" + o.agent_kind + "'");
        cfg.agent.kind = o.agent_kind;
    }
    if (!o.reward_mode.empty()) {
        if (o.reward_mode == "baseline") cfg.reward.mode = RewardMode::Baseline;
        else if (o.reward_mode == "reline") cfg.reward.mode = RewardMode::Reline;
        else throw ConfigError("config: reward.mode: must be 'baseline' or 'reline'");
    }
    if (o.threshold >= 0.0) {
        cfg.reward.low_fps_threshold_ms = o.threshold;
        cfg.auto_threshold = false;
    }
    cfg.output_dir = o.output;
    return cfg;
}

CalibrationResult load_calibration(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open calibration file " + path);
    return run::calibration_from_json(nlohmann::json::parse(is));
}

int cmd_train(const CommonOpts& o) {
    RunConfig cfg = resolve_config(o);
    if (cfg.study.training_episodes <= 0 && cfg.agent.kind != "random")
        throw ConfigError("config: study.training_episodes: must be positive for training");
    auto env = make_env(cfg.env);
    std::cerr << "training " << cfg.agent.kind << " on " << cfg.env.name << " for "
              << cfg.study.training_episodes << " episodes\n";
    auto out = run::train_agent(cfg, *env);
    run::write_train_artifacts(cfg, out, cfg.output_dir);
    std::cout << "checkpoint: " << run::checkpoint_path(cfg.output_dir) << '\n';
    std::cout << "training episodes recorded: " << out.traces.size() << '\n';
    return kExitOk;
}

int cmd_calibrate(const CommonOpts& o, const std::string& checkpoint) {
    RunConfig cfg = resolve_config(o);
    auto env = make_env(cfg.env);
    auto agent = run::load_agent(checkpoint, cfg.agent, env->spec());
    auto policy = run::make_policy(agent, cfg.agent, derive_seed(cfg.study.master_seed, "calib-policy", 0));
    auto result = run::run_calibration(cfg, *env, policy);
    fs::create_directories(cfg.output_dir);
    std::ofstream os(run::calibration_path(cfg.output_dir), std::ios::binary);
    os << run::calibration_to_json(result).dump(2) << '\n';
    std::cout << "t_b = " << result.t_b << " ms, delta = " << result.delta << " ms, t = " << result.t
              << " ms\n";
    if (result.negative_delta_warning)
        std::cerr << "warning: training delta is negative (warmup ran faster than reference)\n";
    return kExitOk;
}

int cmd_loadtest(const CommonOpts& o, const std::vector<std::string>& checkpoints,
                 const std::string& calibration_file, bool with_random, int jobs) {
    RunConfig cfg = resolve_config(o);
    auto env = make_env(cfg.env);

    CalibrationResult calib;
    if (!calibration_file.empty()) calib = load_calibration(calibration_file);
    else if (cfg.auto_threshold)
        throw ConfigError("config: reward.t: t='auto' needs --calibration <file>");
    else
        calib.t_b = calib.t = cfg.reward.low_fps_threshold_ms;

    std::vector<run::TrainedAgent> agents;
    std::vector<run::LoadTestInput> inputs;
    for (const auto& spec : checkpoints) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("config: --checkpoint expects name=path, got '" + spec + "'");
        agents.push_back(run::load_agent(spec.substr(eq + 1), cfg.agent, env->spec()));
        inputs.push_back({spec.substr(0, eq), run::make_policy_factory(agents.back(), cfg.agent)});
    }
    if (with_random) {
        run::TrainedAgent random{"random", env->spec(), std::nullopt, std::nullopt};
        agents.push_back(random);
        inputs.push_back({"random", run::make_policy_factory(agents.back(), cfg.agent)});
    }
    if (inputs.empty()) throw ConfigError("config: loadtest needs at least one --checkpoint or --with-random");

    run::EnvFactory factory = [&cfg] { return make_env(cfg.env); };
    auto out = run::run_loadtest(cfg, *env, calib, inputs, jobs, factory);
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream os(run::manifest_path(cfg.output_dir), std::ios::binary);
        os << run_config_to_json(cfg).dump(2) << '\n';
    }
    run::write_loadtest_artifacts(out, cfg.output_dir);
    std::cout << "report: " << run::report_path(cfg.output_dir) << '\n';
    for (const auto& art : out.artifacts)
        std::cout << art.name << ": " << art.sink.classify().size() << " low-FPS points\n";
    return kExitOk;
}

int cmd_compare(const std::string& report_file, const std::string& out_file) {
    auto rep = report::read_report(report_file);
    std::string summary = report::format_compare_summary(rep);
    std::cout << summary;
    if (!out_file.empty()) {
        std::ofstream os(out_file, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + out_file);
        os << summary;
    }
    return kExitOk;
}

int cmd_report(const std::string& report_file, const std::string& out_dir) {
    auto rep = report::read_report(report_file);
    report::export_plot_data(rep, out_dir);
    std::cout << "exports written to " << out_dir << '\n';
    return kExitOk;
}

int cmd_replay(const CommonOpts& o, const std::string& trace_file, long index) {
    RunConfig cfg = resolve_config(o);
    auto traces = read_traces(trace_file);
    if (index < 0 || static_cast<size_t>(index) >= traces.size())
        throw ConfigError("config: --index: trace file has " + std::to_string(traces.size()) +
                          " episodes");
    auto env = make_env(cfg.env);
    auto result = report::replay_trace(traces[static_cast<size_t>(index)], *env,
                                       game_kind_for(env->spec()), cfg.reward);
    if (result.matched) {
        std::cout << "replay ok: " << traces[static_cast<size_t>(index)].steps.size()
                  << " steps reproduced exactly\n";
        return kExitOk;
    }
    std::cout << "replay diverged at step " << result.divergence_step << " field '" << result.field
              << "': recorded " << result.expected << ", got " << result.actual << '\n';
    return kExitContract;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RL game load-testing harness"};
    app.require_subcommand(1);

    CommonOpts train_o, calib_o, load_o, replay_o;
    std::string checkpoint, calibration_file, report_file, out_file, trace_file;
    std::vector<std::string> checkpoints;
    bool with_random = false;
    int jobs = 1;
    long trace_index = 0;

    auto* train = app.add_subcommand("train", "train an agent, write checkpoint + traces");
    add_common(train, train_o);

    auto* calibrate = app.add_subcommand("calibrate", "derive the low-FPS threshold t");
    add_common(calibrate, calib_o);
    calibrate->add_option("--baseline-checkpoint", checkpoint, "trained baseline checkpoint")->required();

    auto* loadtest = app.add_subcommand("loadtest", "evaluate agents and build the report");
    add_common(loadtest, load_o);
    loadtest->add_option("--checkpoint", checkpoints, "agent as name=checkpoint-path (repeatable)");
    loadtest->add_option("--calibration", calibration_file, "calibration result file");
    loadtest->add_flag("--with-random", with_random, "include the random agent");
    loadtest->add_option("-j,--jobs", jobs, "evaluation worker threads")->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "summarize a report on the console");
    compare->add_option("report", report_file, "report file")->required();
    compare->add_option("-o,--output", out_file, "also write the summary to a file");

    auto* reportc = app.add_subcommand("report", "validate a report and regenerate exports");
    reportc->add_option("report", report_file, "report file")->required();
    reportc->add_option("-o,--output", out_file, "export directory")->required();

    auto* replay = app.add_subcommand("replay", "re-run a recorded episode and verify it");
    add_common(replay, replay_o);
    replay->add_option("--trace", trace_file, "episode trace file (JSON lines)")->required();
    replay->add_option("--index", trace_index, "episode index within the file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (train->parsed()) return cmd_train(train_o);
        if (calibrate->parsed()) return cmd_calibrate(calib_o, checkpoint);
        if (loadtest->parsed())
            return cmd_loadtest(load_o, checkpoints, calibration_file, with_random, jobs);
        if (compare->parsed()) return cmd_compare(report_file, out_file);
        if (reportc->parsed()) return cmd_report(report_file, out_file);
        if (replay->parsed()) return cmd_replay(replay_o, trace_file, trace_index);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const adapter::ProtocolError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitContract;
    } catch (const report::ReportError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitContract;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
