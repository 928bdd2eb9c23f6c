#include "reline/trace.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace reline {

uint64_t observation_digest(const GameObservation& obs) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : obs.values.data) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (i * 8)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

nlohmann::ordered_json trace_to_json(const EpisodeTrace& t) {
    nlohmann::ordered_json j;
    j["env_seed"] = t.env_seed;
    j["finished"] = t.finished;
    j["total_game_reward"] = t.total_game_reward;
    j["total_perf_reward"] = t.total_perf_reward;
    j["total_bonus"] = t.total_bonus;
    j["bug_ids_found"] = t.bug_ids_found;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : t.steps)
        steps.push_back({s.obs_digest, s.action, s.game, s.perf, s.bonus, s.x, s.y, s.rt_ms});
    j["steps"] = std::move(steps);
    return j;
}

EpisodeTrace trace_from_json(const nlohmann::json& j) {
    EpisodeTrace t;
    t.env_seed = j.at("env_seed").get<uint64_t>();
    t.finished = j.at("finished").get<bool>();
    t.total_game_reward = j.at("total_game_reward").get<double>();
    t.total_perf_reward = j.at("total_perf_reward").get<double>();
    t.total_bonus = j.at("total_bonus").get<double>();
    t.bug_ids_found = j.at("bug_ids_found").get<std::vector<std::string>>();
    for (const auto& row : j.at("steps")) {
        TraceStep s;
        s.obs_digest = row.at(0).get<uint64_t>();
        s.action = row.at(1).get<int>();
        s.game = row.at(2).get<double>();
        s.perf = row.at(3).get<double>();
        s.bonus = row.at(4).get<double>();
        s.x = row.at(5).get<double>();
        s.y = row.at(6).get<double>();
        s.rt_ms = row.at(7).get<double>();
        t.steps.push_back(s);
    }
    return t;
}

void write_traces(const std::string& path, const std::vector<EpisodeTrace>& traces) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("traces: cannot open " + path);
    for (const auto& t : traces) os << trace_to_json(t).dump() << "\n";
}

std::vector<EpisodeTrace> read_traces(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("traces: cannot open " + path);
    std::vector<EpisodeTrace> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        out.push_back(trace_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

}  // namespace reline
