// Acceptance gate: one self-contained check per release criterion, each
// printing a single pass/fail line. Run with --criterion N to select one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "reline/calibration.hpp"
#include "reline/cartpole.hpp"
#include "reline/config.hpp"
#include "reline/detector.hpp"
#include "reline/nn.hpp"
#include "reline/racesim.hpp"
#include "reline/random_agent.hpp"
#include "reline/report.hpp"
#include "reline/rewards.hpp"
#include "reline/rollout.hpp"
#include "reline/runner.hpp"
#include "reline/stats.hpp"

using namespace reline;

namespace {

constexpr uint64_t kStudySeeds[] = {11, 22, 33};

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion1_reward_grid() {
    Outcome out;
    RewardConfig rc;
    rc.mode = RewardMode::Reline;
    rc.low_fps_threshold_ms = 18.0;

    long checked = 0;
    for (int xi = 0; xi < 10; ++xi) {
        double x = -30.0 + 60.0 * xi / 9.0;  // spans both sides of theta = 20
        for (int di = 0; di < 10; ++di) {
            double dy = -4.0 + 20.0 * di / 9.0;  // negative through above-cap
            for (int ri = 0; ri < 10; ++ri) {
                double rt = 10.0 + 1.8 * ri;  // straddles t = 18

                // straight transcription of the piecewise definitions
                double oracle_game =
                    std::fabs(x) > rc.centering_limit ? -1.0 : std::clamp(dy, 0.0, rc.progress_cap);
                double oracle_perf =
                    (std::fabs(x) <= rc.centering_limit && rt > rc.low_fps_threshold_ms)
                        ? rc.perf_reward_value
                        : 0.0;

                double got_game = game_reward_race(x, dy, rc);
                double got_perf = perf_reward(x, rt, rc.low_fps_threshold_ms, rc);
                if (got_game != oracle_game || got_perf != oracle_perf) {
                    out.require(false, "mismatch at x=" + fmt(x) + " dy=" + fmt(dy) + " rt=" + fmt(rt));
                    return out;
                }
                ++checked;
            }
        }
    }
    out.note(std::to_string(checked) + " grid combinations exact");
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion2_calibration() {
    Outcome out;
    Rng rng(2026);

    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto sd_of = [&](const std::vector<double>& v) {
        double m = mean_of(v), s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    auto q_of = [](std::vector<double> v, double q) {  // type-7 restated
        std::sort(v.begin(), v.end());
        double pos = q * (static_cast<double>(v.size()) - 1.0);
        size_t i = static_cast<size_t>(pos);
        if (i + 1 >= v.size()) return v.back();
        return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
    };

    std::vector<std::pair<std::vector<double>, std::vector<double>>> cases;  // (reference, warmup)
    cases.push_back({{5, 5, 5, 5, 5}, {5, 5, 5, 5, 5}});             // sd = 0, identical
    cases.push_back({{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}});             // identical
    cases.push_back({{1, 2, 3, 4, 5}, {4, 5, 6, 7, 8}});             // translation
    cases.push_back({{10, 11, 12, 13, 14, 15, 16, 17, 18},
                     {10, 11, 12, 13, 14, 15, 22, 23, 24}});         // tail-only shift
    cases.push_back({{10, 11, 12, 13, 14}, {8, 9, 10, 11, 12}});     // negative delta
    for (int i = 0; i < 16; ++i) {                                   // randomized bulk
        std::vector<double> ref(static_cast<size_t>(uniform_int(rng, 4, 40)));
        for (auto& v : ref) v = 10.0 + gaussian(rng, 0.0, 2.0);
        std::vector<double> warm(static_cast<size_t>(uniform_int(rng, 4, 40)));
        double shift = gaussian(rng, 0.0, 3.0);
        for (auto& v : warm) v = 10.0 + shift + gaussian(rng, 0.0, 2.0);
        cases.push_back({ref, warm});
    }

    for (size_t i = 0; i < cases.size(); ++i) {
        const auto& [ref, warm] = cases[i];
        double oracle_tb = mean_of(ref) + 5.0 * sd_of(ref);
        double oracle_delta = std::max(q_of(warm, 0.25) - q_of(ref, 0.25),
                                       q_of(warm, 0.75) - q_of(ref, 0.75));
        auto r = calibrate(TimingDistribution{ref}, TimingDistribution{warm});
        bool ok = r.t_b == oracle_tb && r.delta == oracle_delta && r.t == oracle_tb + oracle_delta;
        out.require(ok, "case " + std::to_string(i) + " diverged from hand oracle");
        if (ref == warm) out.require(r.delta == 0.0, "identical inputs must give delta 0");
    }
    out.note(std::to_string(cases.size()) + " distributions exact");
    return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion3_detector() {
    Outcome out;

    // boundary: 51/100 exceedances is a point, 50/100 is not
    detect::PointSink boundary({1.0, 1.0}, 20.0);
    for (int i = 0; i < 100; ++i) boundary.record(0.5, 0.5, i < 51 ? 25.0 : 15.0, i);
    for (int i = 0; i < 100; ++i) boundary.record(1.5, 0.5, i < 50 ? 25.0 : 15.0, i);
    auto bpts = boundary.classify();
    out.require(bpts.size() == 1 && bpts[0].stats.key == detect::PointKey{0, 0},
                "51/100 vs 50/100 boundary wrong");

    for (uint64_t seed = 0; seed < 100 && out.pass; ++seed) {
        Rng rng(seed);
        const double t = 12.0;
        detect::BinResolution res{1.0, 1.0};
        struct Rec {
            double x, y, rt;
        };
        std::vector<Rec> log(static_cast<size_t>(uniform_int(rng, 200, 10000)));
        for (auto& r : log)
            r = {uniform01(rng) * 12.0, uniform01(rng) * 12.0, 8.0 + uniform01(rng) * 8.0};

        detect::PointSink sink(res, t, seed);
        for (size_t i = 0; i < log.size(); ++i)
            sink.record(log[i].x, log[i].y, log[i].rt, static_cast<long>(i / 25));

        std::map<detect::PointKey, std::vector<double>> grouped;
        for (const auto& r : log) grouped[detect::bin_point(r.x, r.y, res)].push_back(r.rt);
        std::vector<std::pair<double, detect::PointKey>> expected;  // (median, key)
        for (auto& [key, rts] : grouped) {
            long exceed =
                static_cast<long>(std::count_if(rts.begin(), rts.end(), [&](double v) { return v > t; }));
            if (100.0 * static_cast<double>(exceed) / static_cast<double>(rts.size()) > 50.0)
                expected.emplace_back(stats::descriptive(rts).median, key);
        }
        std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        auto got = sink.classify();
        bool ok = got.size() == expected.size();
        for (size_t i = 0; ok && i < got.size(); ++i)
            ok = got[i].stats.key == expected[i].second && got[i].median_rt == expected[i].first;
        out.require(ok, "re-scan oracle mismatch at seed " + std::to_string(seed));
    }
    out.note("100 randomized logs match the re-scan oracle");
    return out;
}

// ---------------------------------------------------------------- criterion 4

double permutation_mw_p(const std::vector<double>& a, const std::vector<double>& b) {
    // exhaustive two-sided permutation test on the rank sum of group a
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = stats::midranks(pooled);
    size_t n = a.size(), N = pooled.size();
    double nm = static_cast<double>(n) * static_cast<double>(b.size());

    double obs_ra = 0.0;
    for (size_t i = 0; i < n; ++i) obs_ra += ranks[i];
    double obs_u = obs_ra - static_cast<double>(n) * (n + 1) / 2.0;
    double obs_dev = std::fabs(obs_u - nm / 2.0);

    long total = 0, extreme = 0;
    std::vector<size_t> idx(n);
    std::function<void(size_t, size_t, double)> visit = [&](size_t pos, size_t start, double ra) {
        if (pos == n) {
            ++total;
            double u = ra - static_cast<double>(n) * (n + 1) / 2.0;
            if (std::fabs(u - nm / 2.0) >= obs_dev - 1e-9) ++extreme;
            return;
        }
        for (size_t i = start; i < N; ++i) visit(pos + 1, i + 1, ra + ranks[i]);
    };
    visit(0, 0, 0.0);
    return static_cast<double>(extreme) / static_cast<double>(total);
}

Outcome criterion4_statistics() {
    Outcome out;
    Rng rng(404);

    // Mann-Whitney vs exhaustive permutation for every size split of n <= 10
    double worst = 0.0;
    for (size_t na = 1; na <= 9; ++na) {
        for (size_t nb = 1; na + nb <= 10; ++nb) {
            for (int rep = 0; rep < 40; ++rep) {
                std::vector<double> a(na), b(nb);
                bool tied = rep % 2 == 0;
                for (auto& v : a) v = tied ? uniform_int(rng, 0, 3) : gaussian(rng, 0.0, 1.0);
                for (auto& v : b) v = tied ? uniform_int(rng, 0, 3) : gaussian(rng, 0.5, 1.0);
                double oracle = permutation_mw_p(a, b);
                double got = stats::mann_whitney(a, b).p_value;
                worst = std::max(worst, std::fabs(got - oracle));
            }
        }
    }
    out.require(worst <= 0.02, "mann-whitney off oracle by " + fmt(worst));
    out.note("max |p - permutation oracle| = " + fmt(worst));

    // Cliff's delta vs the O(nm) definition, exact
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> a(static_cast<size_t>(uniform_int(rng, 1, 15)));
        std::vector<double> b(static_cast<size_t>(uniform_int(rng, 1, 15)));
        for (auto& v : a) v = uniform_int(rng, 0, 5);
        for (auto& v : b) v = uniform_int(rng, 0, 5);
        long gt = 0, lt = 0;
        for (double x : a)
            for (double y : b) {
                if (x > y) ++gt;
                if (x < y) ++lt;
            }
        double oracle = static_cast<double>(gt - lt) / static_cast<double>(a.size() * b.size());
        out.require(stats::cliffs_delta(a, b).statistic == oracle, "cliff's delta not exact");
    }
    out.require(stats::cliffs_magnitude(0.05) == "negligible" && stats::cliffs_magnitude(0.2) == "small" &&
                    stats::cliffs_magnitude(0.4) == "medium" && stats::cliffs_magnitude(0.6) == "large" &&
                    stats::cliffs_magnitude(-0.6) == "large",
                "cliff's magnitude labels wrong");

    // Holm vs a hand step-down on 10 random fixtures
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> p(static_cast<size_t>(uniform_int(rng, 1, 8)));
        for (auto& v : p) v = uniform01(rng);
        size_t m = p.size();
        std::vector<size_t> order(m);
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return p[i] < p[j]; });
        std::vector<double> oracle(m);
        double running = 0.0;
        for (size_t k = 0; k < m; ++k) {
            running = std::max(running, static_cast<double>(m - k) * p[order[k]]);
            oracle[order[k]] = std::min(1.0, running);
        }
        out.require(stats::holm_adjust(p) == oracle, "holm step-down mismatch");
    }

    // Spearman fixtures
    std::vector<double> inc = {1, 2, 3, 4, 5}, dec = {5, 4, 3, 2, 1};
    out.require(stats::spearman(inc, inc).statistic == 1.0, "spearman rho(x,x) != 1");
    out.require(stats::spearman(inc, dec).statistic == -1.0, "spearman rho != -1 on reversal");
    double rho = stats::spearman({1, 2, 3, 4}, {2, 1, 4, 3}).statistic;
    out.require(std::fabs(rho - 0.6) < 1e-12, "spearman {2,1,4,3} fixture != 0.6");
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5_gradients() {
    Outcome out;
    Rng rng(55);
    double worst = 0.0;

    for (int trial = 0; trial < 50; ++trial) {
        nn::NetworkSpec spec;
        spec.init_seed = 1000 + static_cast<uint64_t>(trial);
        std::vector<int> in_shape;
        if (trial % 5 == 4) {
            int c = uniform_int(rng, 1, 3), hw = uniform_int(rng, 4, 6);
            int oc = uniform_int(rng, 2, 4);
            int ohw = (hw - 3) / 2 + 1;
            spec.layers = {nn::LayerSpec::conv(c, oc, 3, 2, hw, hw), nn::LayerSpec::relu(),
                           nn::LayerSpec::dense(oc * ohw * ohw, uniform_int(rng, 2, 4))};
            in_shape = {c, hw, hw};
        } else {
            int d0 = uniform_int(rng, 2, 6), d1 = uniform_int(rng, 2, 6), d2 = uniform_int(rng, 2, 4);
            spec.layers = {nn::LayerSpec::dense(d0, d1), nn::LayerSpec::relu(),
                           nn::LayerSpec::dense(d1, d2)};
            in_shape = {d0};
        }
        nn::Network net(spec);
        Tensor input(in_shape);
        for (auto& v : input.data) v = gaussian(rng, 0.0, 1.0);
        int target = uniform_int(rng, 0, static_cast<int>(net.output_size()) - 1);

        nn::ForwardCache cache;
        Tensor logits = net.forward(input, &cache);
        auto [loss, grad] = nn::softmax_cross_entropy(logits, target);
        (void)loss;
        nn::ParameterSet analytic = net.backward(cache, grad);

        const double eps = 1e-5;
        for (size_t l = 0; l < net.params().weights.size(); ++l) {
            for (int part = 0; part < 2; ++part) {
                Tensor& param = part == 0 ? net.params().weights[l] : net.params().biases[l];
                const Tensor& g = part == 0 ? analytic.weights[l] : analytic.biases[l];
                for (size_t i = 0; i < param.data.size(); ++i) {
                    double saved = param.data[i];
                    param.data[i] = saved + eps;
                    double up = nn::softmax_cross_entropy(net.forward(input), target).first;
                    param.data[i] = saved - eps;
                    double down = nn::softmax_cross_entropy(net.forward(input), target).first;
                    param.data[i] = saved;
                    double fd = (up - down) / (2.0 * eps);
                    double denom = std::max({std::fabs(fd), std::fabs(g.data[i]), 1e-8});
                    worst = std::max(worst, std::fabs(fd - g.data[i]) / denom);
                }
            }
        }
    }
    out.require(worst < 1e-4, "worst relative gradient error " + fmt(worst));
    out.note("50 networks, worst relative error " + fmt(worst));
    return out;
}

// ---------------------------------------------------------------- criterion 6

std::string read_bytes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void run_pipeline(const RunConfig& cfg_in, const std::string& dir) {
    RunConfig cfg = cfg_in;  // cfg.output_dir stays relative; artifacts land in `dir`
    auto env = make_env(cfg.env);
    auto trained = run::train_agent(cfg, *env);
    run::write_train_artifacts(cfg, trained, dir);

    Policy greedy = run::make_policy(trained.agent, cfg.agent, 0);
    CalibrationResult calib = run::run_calibration(cfg, *env, greedy);
    {
        std::ofstream os(run::calibration_path(dir), std::ios::binary);
        os << run::calibration_to_json(calib).dump(2) << '\n';
    }

    run::TrainedAgent random{"random", env->spec(), std::nullopt, std::nullopt};
    AgentConfig rnd_cfg;
    rnd_cfg.kind = "random";
    std::vector<run::LoadTestInput> agents = {
        {"reline", run::make_policy_factory(trained.agent, cfg.agent)},
        {"random", run::make_policy_factory(random, rnd_cfg)}};
    auto lt = run::run_loadtest(cfg, *env, calib, agents, 1);
    run::write_loadtest_artifacts(lt, dir);
}

Outcome criterion6_determinism() {
    Outcome out;
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / ("reline-accept-" + std::to_string(::getpid()));
    fs::create_directories(base);

    RunConfig cfg = preset_config("cartpole-desk");
    cfg.study.training_episodes = 64;
    cfg.study.evaluation_episodes = 60;
    cfg.study.repeats = 2;
    cfg.study.calib_reference_episodes = 20;
    cfg.study.calib_warmup_episodes = 10;
    cfg.study.master_seed = 7;
    cfg.reward.low_fps_threshold_ms = 9.0;
    cfg.agent.eval_sample = true;

    std::string da = (base / "a").string(), db = (base / "b").string();
    run_pipeline(cfg, da);
    run_pipeline(cfg, db);

    for (const char* f : {"manifest.json", "checkpoint.txt", "calibration.json", "report.json"}) {
        std::string ba = read_bytes((fs::path(da) / f).string());
        std::string bb = read_bytes((fs::path(db) / f).string());
        out.require(!ba.empty() && ba == bb, std::string(f) + " differs between identical runs");
    }
    std::string ta = read_bytes(run::eval_traces_path(da, "reline"));
    std::string tb = read_bytes(run::eval_traces_path(db, "reline"));
    out.require(!ta.empty() && ta == tb, "evaluation traces differ between identical runs");
    fs::remove_all(base);
    out.note("two full train+calibrate+loadtest runs byte-identical");
    return out;
}

// ------------------------------------------------------------- criteria 7..9

struct EvalCounts {
    long reline = 0, baseline = 0, random = 0;
    long total_episodes = 0;
};

// Trains reline + baseline variants of `cfg`, evaluates reline/baseline/random
// through the production load-test path, and returns the artifacts.
run::LoadTestOutput run_three_agent_study(const RunConfig& cfg, const CalibrationResult& calib,
                                          run::TrainedAgent& reline_agent,
                                          run::TrainedAgent& baseline_agent) {
    auto env = make_env(cfg.env);
    run::TrainedAgent random{"random", env->spec(), std::nullopt, std::nullopt};
    AgentConfig rnd_cfg;
    rnd_cfg.kind = "random";
    std::vector<run::LoadTestInput> agents = {
        {"reline", run::make_policy_factory(reline_agent, cfg.agent)},
        {"baseline", run::make_policy_factory(baseline_agent, cfg.agent)},
        {"random", run::make_policy_factory(random, rnd_cfg)}};
    return run::run_loadtest(cfg, *env, calib, agents, 1);
}

Outcome criterion7_cartpole() {
    Outcome out;
    for (uint64_t seed : kStudySeeds) {
        RunConfig cfg = preset_config("cartpole-desk");  // 480 training episodes, desk budget
        cfg.study.master_seed = seed;
        cfg.study.evaluation_episodes = 1000;
        cfg.study.repeats = 1;
        cfg.reward.low_fps_threshold_ms = 9.0;  // detector threshold; unused by rewards here

        RunConfig bcfg = cfg;
        bcfg.reward.mode = RewardMode::Baseline;
        bcfg.reward.bonus_mode = BonusMode::Fixed;

        auto env_r = make_env(cfg.env);
        auto env_b = make_env(bcfg.env);
        auto reline = run::train_agent(cfg, *env_r);
        auto baseline = run::train_agent(bcfg, *env_b);

        CalibrationResult calib;
        calib.t = cfg.reward.low_fps_threshold_ms;
        auto lt = run_three_agent_study(cfg, calib, reline.agent, baseline.agent);

        EvalCounts c;
        for (const auto& a : lt.artifacts) {
            long both = run::episodes_with_distinct_bugs(a.traces, 2);
            if (a.name == "reline") c.reline = both;
            else if (a.name == "baseline") c.baseline = both;
            else c.random = both;
            c.total_episodes = static_cast<long>(a.traces.size());
        }
        out.note("seed " + std::to_string(seed) + ": both-bugs reline=" + std::to_string(c.reline) +
                 " baseline=" + std::to_string(c.baseline) + " random=" + std::to_string(c.random));
        out.require(c.reline >= 3 * c.baseline && c.reline > c.baseline,
                    "seed " + std::to_string(seed) + ": reline not >= 3x baseline");
        out.require(c.random * 100 <= c.total_episodes,
                    "seed " + std::to_string(seed) + ": random found both bugs in > 1% of episodes");
    }
    return out;
}

Outcome criterion8_dotmaze() {
    Outcome out;
    for (uint64_t seed : kStudySeeds) {
        RunConfig cfg = preset_config("dotmaze-desk");
        cfg.study.master_seed = seed;
        cfg.reward.low_fps_threshold_ms = 9.0;

        RunConfig bcfg = cfg;
        bcfg.reward.mode = RewardMode::Baseline;
        bcfg.reward.bonus_mode = BonusMode::Fixed;

        auto env_r = make_env(cfg.env);
        auto env_b = make_env(bcfg.env);
        auto reline = run::train_agent(cfg, *env_r);
        auto baseline = run::train_agent(bcfg, *env_b);

        CalibrationResult calib;
        calib.t = cfg.reward.low_fps_threshold_ms;
        auto lt = run_three_agent_study(cfg, calib, reline.agent, baseline.agent);

        long reline_count = 0, baseline_count = 0;
        for (const auto& a : lt.artifacts) {
            long gates3 = run::episodes_with_distinct_bugs(a.traces, 3);
            if (a.name == "reline") reline_count = gates3;
            else if (a.name == "baseline") baseline_count = gates3;
        }
        out.note("seed " + std::to_string(seed) + ": >=3-gates reline=" + std::to_string(reline_count) +
                 " baseline=" + std::to_string(baseline_count));
        out.require(reline_count > baseline_count,
                    "seed " + std::to_string(seed) + ": reline not strictly above baseline");
    }
    return out;
}

Outcome criterion9_racesim() {
    Outcome out;
    for (uint64_t seed : kStudySeeds) {
        RunConfig cfg = preset_config("race-desk");
        cfg.study.master_seed = seed;

        RunConfig bcfg = cfg;
        bcfg.reward.mode = RewardMode::Baseline;
        bcfg.reward.bonus_mode = BonusMode::Fixed;
        bcfg.auto_threshold = false;

        auto env_b = make_env(bcfg.env);
        auto baseline = run::train_agent(bcfg, *env_b);

        // the baseline agent drives calibration, which resolves t for reline
        Policy baseline_greedy = run::make_policy(baseline.agent, bcfg.agent, 0);
        CalibrationResult calib = run::run_calibration(cfg, *env_b, baseline_greedy);
        cfg.reward.low_fps_threshold_ms = calib.t;
        cfg.auto_threshold = false;

        auto env_r = make_env(cfg.env);
        auto reline = run::train_agent(cfg, *env_r);

        auto lt = run_three_agent_study(cfg, calib, reline.agent, baseline.agent);

        size_t reline_pts = 0, baseline_pts = 0;
        bool band_ok = true, random_ok = true;
        const double band = cfg.reward.centering_limit * 1.8;  // theta in normalized units
        for (const auto& a : lt.artifacts) {
            auto points = a.sink.classify();
            if (a.name == "reline") {
                reline_pts = points.size();
                for (const auto& p : points) {
                    double cx = (p.stats.key.x_bin + 0.5) * cfg.bins.x_width;
                    if (std::fabs(cx) > band) band_ok = false;
                }
            } else if (a.name == "baseline") {
                baseline_pts = points.size();
            } else {
                for (const auto& p : points) {
                    double cy = (p.stats.key.y_bin + 0.5) * cfg.bins.y_width;
                    if (cy > 15.0) random_ok = false;  // first 15% of path_done
                }
            }
        }
        out.note("seed " + std::to_string(seed) + ": t=" + fmt(calib.t) + " points reline=" +
                 std::to_string(reline_pts) + " baseline=" + std::to_string(baseline_pts));
        out.require(reline_pts > baseline_pts,
                    "seed " + std::to_string(seed) + ": reline points not strictly above baseline");
        out.require(reline_pts >= 8, "seed " + std::to_string(seed) + ": fewer than 8 reline hotspot points");
        out.require(band_ok, "seed " + std::to_string(seed) + ": reline point outside the exploration band");
        out.require(random_ok, "seed " + std::to_string(seed) + ": random point past 15% of path_done");
    }
    return out;
}

// --------------------------------------------------------------- criterion 10

Outcome criterion10_stability() {
    Outcome out;
    RaceSimConfig rc;
    rc.cost_field.base_cost_ms = 10.0;
    rc.cost_field.noise_stddev_ms = 0.3;
    // hotspots straddling the racing line so a constant-throttle run sweeps a
    // structured timing profile
    for (int i = 0; i < 6; ++i)
        rc.cost_field.hotspots.push_back({0.0, 10.0 + 15.0 * i, 30.0, 4.0});
    RaceSimEnv env(rc);

    std::vector<int> throttle(static_cast<size_t>(rc.max_episode_steps), 2);
    auto res = stability_check(throttle, env, 300, 4242);

    out.note("min rho " + fmt(res.min_rho) + ", median rho " + fmt(res.median_rho) +
             ", max adjusted p " + fmt(res.max_adjusted_p));
    out.require(res.all_significant, "a pairwise correlation lost significance after Holm at 0.05");
    out.require(res.min_rho >= 0.7, "minimum pairwise Spearman rho below 0.7");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "race reward formulas match the piecewise oracle", criterion1_reward_grid},
        {2, "calibration matches hand oracles", criterion2_calibration},
        {3, "detector classification matches a naive re-scan", criterion3_detector},
        {4, "nonparametric statistics match reference oracles", criterion4_statistics},
        {5, "backprop matches finite differences", criterion5_gradients},
        {6, "seeded pipeline runs are byte-identical", criterion6_determinism},
        {7, "cartpole: reline finds both bugs far more often than baseline", criterion7_cartpole},
        {8, "dotmaze: reline tours more gates than baseline", criterion8_dotmaze},
        {9, "racesim: reline surfaces the planted hotspots", criterion9_racesim},
        {10, "constant-action timing profiles are rank-stable", criterion10_stability},
    };

    bool all_pass = true;
    for (const auto& e : entries) {
        if (only != 0 && e.id != only) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = e.fn();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d: %s  %s (%.1fs)%s%s\n", e.id, r.pass ? "PASS" : "FAIL", e.name, secs,
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
