#include "reline/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace reline::report {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) { return nlohmann::json(v).dump(); }

ojson summary_json(const DistributionSummary& s) {
    return {{"mean", s.mean}, {"sd", s.sd}, {"q1", s.q1}, {"q3", s.q3}, {"count", s.count}};
}

ojson descriptive_json(const stats::Descriptive& d) {
    return {{"mean", d.mean}, {"median", d.median}, {"stdev", d.stdev}, {"min", d.min}, {"max", d.max}};
}

ojson group_json(const detect::GroupSummary& g) {
    return {{"point_count", g.point_count},
            {"timing", descriptive_json(g.timing_stats)},
            {"confidence", descriptive_json(g.confidence_stats)},
            {"avg_coverage", g.avg_coverage}};
}

std::vector<double> median_rts(const std::vector<detect::LowFpsPoint>& pts) {
    std::vector<double> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.push_back(p.median_rt);
    return v;
}

}  // namespace

std::vector<size_t> select_evidence(const detect::LowFpsPoint& point,
                                    const std::vector<EpisodeTrace>& traces,
                                    const detect::BinResolution& res) {
    std::vector<std::pair<double, size_t>> candidates;  // (max rt in bin, trace idx)
    for (size_t i = 0; i < traces.size(); ++i) {
        double best = -1.0;
        for (const auto& s : traces[i].steps)
            if (detect::bin_point(s.x, s.y, res) == point.stats.key) best = std::max(best, s.rt_ms);
        if (best >= 0.0) candidates.emplace_back(best, i);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<size_t> out;
    for (const auto& [rt, idx] : candidates) {
        out.push_back(idx);
        if (out.size() == 3) break;
    }
    return out;
}

nlohmann::ordered_json build_report(const RunConfig& cfg, const CalibrationResult& calib,
                                    const std::vector<AgentArtifacts>& agents) {
    ojson rep;
    rep["schema"] = "load-test-report v1";
    rep["run_manifest"] = run_config_to_json(cfg);
    rep["calibration"] = {{"t_b", calib.t_b},
                          {"delta", calib.delta},
                          {"t", calib.t},
                          {"reference", summary_json(calib.reference_summary)},
                          {"warmup", summary_json(calib.warmup_summary)},
                          {"negative_delta_warning", calib.negative_delta_warning}};

    std::vector<std::vector<detect::LowFpsPoint>> point_sets;
    auto agents_json = ojson::array();
    for (const auto& a : agents) {
        if (!a.sink || !a.traces) throw ReportError("report: agent artifacts incomplete for " + a.name);
        auto points = a.sink->classify();
        auto points_json = ojson::array();
        auto scatter = ojson::array();
        const auto& res = a.sink->resolution();
        for (const auto& p : points) {
            auto evidence = select_evidence(p, *a.traces, res);
            if (evidence.empty())
                throw ReportError("report: no evidence trace covers bin (" +
                                  std::to_string(p.stats.key.x_bin) + ", " +
                                  std::to_string(p.stats.key.y_bin) + ") for " + a.name);
            points_json.push_back({{"x_bin", p.stats.key.x_bin},
                                   {"y_bin", p.stats.key.y_bin},
                                   {"coverage", p.stats.coverage},
                                   {"exceedances", p.stats.exceedances},
                                   {"confidence", p.stats.confidence()},
                                   {"median_rt", p.median_rt},
                                   {"max_rt", p.max_rt},
                                   {"evidence", evidence}});
            scatter.push_back({(p.stats.key.x_bin + 0.5) * res.x_width,
                               (p.stats.key.y_bin + 0.5) * res.y_width});
        }
        ojson entry = {{"name", a.name},
                       {"episodes", a.traces->size()},
                       {"points", points_json},
                       {"scatter", scatter},
                       {"summary", group_json(detect::summarize_group(a.name, points))}};
        if (a.per_repeat_bug_tallies && !a.per_repeat_bug_tallies->empty()) {
            std::vector<double> tallies(a.per_repeat_bug_tallies->begin(),
                                        a.per_repeat_bug_tallies->end());
            entry["repeat_tallies"] = {{"per_repeat", *a.per_repeat_bug_tallies},
                                       {"stats", descriptive_json(stats::descriptive(tallies))}};
        }
        agents_json.push_back(std::move(entry));
        point_sets.push_back(std::move(points));
    }
    rep["agents"] = agents_json;

    std::vector<const detect::PointSink*> sinks;
    for (const auto& a : agents) sinks.push_back(a.sink);
    rep["regular_group"] = group_json(detect::summarize_regular(sinks));

    // Pairwise per-point median-rT comparisons; Holm across all emitted tests.
    auto comparisons = ojson::array();
    std::vector<double> raw_p;
    for (size_t i = 0; i < agents.size(); ++i) {
        for (size_t j = i + 1; j < agents.size(); ++j) {
            auto va = median_rts(point_sets[i]);
            auto vb = median_rts(point_sets[j]);
            if (va.empty() || vb.empty()) continue;
            auto mw = stats::mann_whitney(va, vb);
            auto cd = stats::cliffs_delta(va, vb);
            raw_p.push_back(mw.p_value);
            comparisons.push_back({{"a", agents[i].name},
                                   {"b", agents[j].name},
                                   {"metric", "median_rt"},
                                   {"mw_u", mw.statistic},
                                   {"p_value", mw.p_value},
                                   {"adjusted_p", 1.0},
                                   {"cliffs_delta", cd.statistic},
                                   {"magnitude", *cd.magnitude}});
        }
    }
    auto adjusted = stats::holm_adjust(raw_p);
    for (size_t k = 0; k < adjusted.size(); ++k) comparisons[k]["adjusted_p"] = adjusted[k];
    rep["comparisons"] = comparisons;

    auto names = ojson::array();
    auto matrix = ojson::array();
    for (size_t i = 0; i < agents.size(); ++i) {
        names.push_back(agents[i].name);
        auto row = ojson::array();
        for (size_t j = 0; j < agents.size(); ++j)
            row.push_back(detect::overlap(point_sets[i], agents[i].sink->resolution(), point_sets[j],
                                          agents[j].sink->resolution())
                              .size());
        matrix.push_back(row);
    }
    rep["overlap"] = {{"names", names}, {"matrix", matrix}};
    validate_report(rep);
    return rep;
}

namespace {

void check_keys(const nlohmann::json& j, const std::string& path,
                const std::vector<std::string>& required, const std::vector<std::string>& optional = {}) {
    if (!j.is_object()) throw ReportError("report schema: " + path + " must be an object");
    for (const auto& k : required)
        if (!j.contains(k)) throw ReportError("report schema: " + path + " missing field '" + k + "'");
    for (const auto& [k, v] : j.items()) {
        bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                     std::find(optional.begin(), optional.end(), k) != optional.end();
        if (!known) throw ReportError("report schema: unknown field '" + path + "." + k + "'");
    }
}

void check_summary(const nlohmann::json& j, const std::string& path) {
    check_keys(j, path, {"mean", "sd", "q1", "q3", "count"});
}

void check_group(const nlohmann::json& j, const std::string& path) {
    check_keys(j, path, {"point_count", "timing", "confidence", "avg_coverage"});
    check_keys(j["timing"], path + ".timing", {"mean", "median", "stdev", "min", "max"});
    check_keys(j["confidence"], path + ".confidence", {"mean", "median", "stdev", "min", "max"});
}

}  // namespace

void validate_report(const nlohmann::json& rep) {
    check_keys(rep, "report",
               {"schema", "run_manifest", "calibration", "agents", "regular_group", "comparisons", "overlap"});
    if (rep["schema"] != "load-test-report v1")
        throw ReportError("report schema: unsupported schema tag " + rep["schema"].dump());

    const auto& man = rep["run_manifest"];
    check_keys(man, "run_manifest", {"env", "agent", "reward", "study", "bins", "output_dir"});
    check_keys(man["env"], "run_manifest.env", {"name", "params"});
    check_keys(man["agent"], "run_manifest.agent", {"kind", "eval_sample", "cross_entropy", "dqn"});
    check_keys(man["reward"], "run_manifest.reward",
               {"mode", "theta", "M", "t", "bonus", "finish_bonus_fixed", "perf_reward_value",
                "perf_bonus_multiplier", "bug_reward_value"});
    check_keys(man["study"], "run_manifest.study",
               {"training_episodes", "evaluation_episodes", "repeats", "master_seed",
                "calib_reference_episodes", "calib_warmup_episodes"});
    check_keys(man["bins"], "run_manifest.bins", {"x_width", "y_width"});

    const auto& calib = rep["calibration"];
    check_keys(calib, "calibration", {"t_b", "delta", "t", "reference", "warmup", "negative_delta_warning"});
    check_summary(calib["reference"], "calibration.reference");
    check_summary(calib["warmup"], "calibration.warmup");

    if (!rep["agents"].is_array()) throw ReportError("report schema: agents must be an array");
    for (const auto& a : rep["agents"]) {
        check_keys(a, "agents[]", {"name", "episodes", "points", "scatter", "summary"},
                   {"repeat_tallies"});
        if (a.contains("repeat_tallies")) {
            check_keys(a["repeat_tallies"], "agents[].repeat_tallies", {"per_repeat", "stats"});
            check_keys(a["repeat_tallies"]["stats"], "agents[].repeat_tallies.stats",
                       {"mean", "median", "stdev", "min", "max"});
        }
        for (const auto& p : a["points"]) {
            check_keys(p, "agents[].points[]",
                       {"x_bin", "y_bin", "coverage", "exceedances", "confidence", "median_rt", "max_rt",
                        "evidence"});
            if (p["evidence"].empty())
                throw ReportError("report schema: point without evidence in agent " +
                                  a["name"].get<std::string>());
        }
        if (a["scatter"].size() != a["points"].size())
            throw ReportError("report schema: scatter/points length mismatch");
        check_group(a["summary"], "agents[].summary");
    }
    check_group(rep["regular_group"], "regular_group");
    for (const auto& c : rep["comparisons"])
        check_keys(c, "comparisons[]",
                   {"a", "b", "metric", "mw_u", "p_value", "adjusted_p", "cliffs_delta", "magnitude"});
    check_keys(rep["overlap"], "overlap", {"names", "matrix"});
    size_t n = rep["overlap"]["names"].size();
    if (rep["overlap"]["matrix"].size() != n) throw ReportError("report schema: overlap matrix shape");
    for (const auto& row : rep["overlap"]["matrix"])
        if (row.size() != n) throw ReportError("report schema: overlap matrix shape");
}

void write_report(const std::string& path, const nlohmann::ordered_json& rep) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ReportError("report: cannot write " + path);
    os << rep.dump(2) << '\n';
}

nlohmann::ordered_json read_report(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ReportError("report: cannot open " + path);
    nlohmann::ordered_json rep;
    try {
        rep = nlohmann::ordered_json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ReportError(std::string("report: parse error: ") + e.what());
    }
    validate_report(rep);
    return rep;
}

void export_plot_data(const nlohmann::json& rep, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    auto open = [&](const std::string& name) {
        std::ofstream os(fs::path(dir) / name, std::ios::binary);
        if (!os) throw ReportError("report: cannot write export " + name);
        return os;
    };

    {
        auto os = open("timing_distributions.tsv");
        os << "group\tpoint_count\tmean\tmedian\tstdev\tmin\tmax\n";
        auto row = [&](const std::string& name, const nlohmann::json& g) {
            const auto& t = g["timing"];
            os << name << '\t' << g["point_count"].get<size_t>() << '\t' << num(t["mean"]) << '\t'
               << num(t["median"]) << '\t' << num(t["stdev"]) << '\t' << num(t["min"]) << '\t'
               << num(t["max"]) << '\n';
        };
        for (const auto& a : rep["agents"]) row(a["name"].get<std::string>(), a["summary"]);
        row("regular", rep["regular_group"]);
    }
    {
        auto sx = open("scatter_x.tsv");
        auto sy = open("scatter_y.tsv");
        sx << "agent\tx\n";
        sy << "agent\ty\n";
        for (const auto& a : rep["agents"]) {
            for (const auto& pt : a["scatter"]) {
                sx << a["name"].get<std::string>() << '\t' << num(pt[0]) << '\n';
                sy << a["name"].get<std::string>() << '\t' << num(pt[1]) << '\n';
            }
        }
    }
    for (const auto& a : rep["agents"]) {
        auto os = open("points_" + a["name"].get<std::string>() + ".tsv");
        os << "x_bin\ty_bin\tcoverage\texceedances\tconfidence\tmedian_rt\tmax_rt\n";
        for (const auto& p : a["points"])
            os << p["x_bin"].get<long>() << '\t' << p["y_bin"].get<long>() << '\t'
               << p["coverage"].get<long>() << '\t' << p["exceedances"].get<long>() << '\t'
               << num(p["confidence"]) << '\t' << num(p["median_rt"]) << '\t' << num(p["max_rt"]) << '\n';
    }
}

ReplayResult replay_trace(const EpisodeTrace& trace, Environment& env, GameKind kind,
                          const RewardConfig& rc) {
    ReplayResult out;
    auto diverge = [&](size_t step, const char* field, double expected, double actual) {
        out.matched = false;
        out.divergence_step = step;
        out.field = field;
        out.expected = expected;
        out.actual = actual;
    };

    GameObservation obs = env.reset(trace.env_seed);
    double sum_perf = 0.0;
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& rec = trace.steps[i];
        if (env.terminal()) {
            diverge(i, "terminal", 0.0, 1.0);
            return out;
        }
        uint64_t digest = observation_digest(obs);
        if (digest != rec.obs_digest) {
            diverge(i, "obs_digest", static_cast<double>(rec.obs_digest), static_cast<double>(digest));
            return out;
        }
        StepResult sr = env.step(rec.action);
        RewardBreakdown rb = step_reward(kind, sr, rc, sum_perf);
        sum_perf += rb.perf;
        struct {
            const char* name;
            double expected, actual;
        } fields[] = {{"game", rec.game, rb.game},     {"perf", rec.perf, rb.perf},
                      {"bonus", rec.bonus, rb.bonus},  {"x", rec.x, sr.x},
                      {"y", rec.y, sr.y},              {"rt_ms", rec.rt_ms, sr.timing.rt_ms}};
        for (const auto& f : fields) {
            if (f.expected != f.actual) {
                diverge(i, f.name, f.expected, f.actual);
                return out;
            }
        }
        obs = std::move(sr.observation);
    }
    if (!env.terminal()) diverge(trace.steps.size(), "terminal", 1.0, 0.0);
    return out;
}

std::string format_compare_summary(const nlohmann::json& rep) {
    std::ostringstream os;
    os << "agents:\n";
    for (const auto& a : rep["agents"]) {
        const auto& s = a["summary"];
        os << "  " << a["name"].get<std::string>() << ": " << s["point_count"].get<size_t>()
           << " low-FPS points";
        if (s["point_count"].get<size_t>() > 0)
            os << " (median rT " << num(s["timing"]["median"]) << " ms, median confidence "
               << num(s["confidence"]["median"]) << "%)";
        os << '\n';
    }
    os << "overlap matrix (shared bins):\n";
    const auto& names = rep["overlap"]["names"];
    os << "  " << std::string(12, ' ');
    for (const auto& n : names) os << n.get<std::string>() << '\t';
    os << '\n';
    for (size_t i = 0; i < names.size(); ++i) {
        os << "  " << names[i].get<std::string>() << '\t';
        for (const auto& v : rep["overlap"]["matrix"][i]) os << v.get<size_t>() << '\t';
        os << '\n';
    }
    if (rep["comparisons"].empty()) {
        os << "no pairwise tests (empty point sets)\n";
    } else {
        os << "pairwise median-rT tests:\n";
        for (const auto& c : rep["comparisons"])
            os << "  " << c["a"].get<std::string>() << " vs " << c["b"].get<std::string>() << ": U="
               << num(c["mw_u"]) << " p=" << num(c["p_value"]) << " adj_p=" << num(c["adjusted_p"])
               << " d=" << num(c["cliffs_delta"]) << " (" << c["magnitude"].get<std::string>() << ")\n";
    }
    return os.str();
}

}  // namespace reline::report
