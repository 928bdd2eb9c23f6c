#include "reline/ref_server.hpp"

#include <algorithm>

namespace reline::adapter {

RefServer::RefServer(RefServerConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.position_cost_ms.empty())
        cfg_.position_cost_ms.assign(static_cast<size_t>(cfg_.corridor_length + 1), 10.0);
}

double RefServer::cost_at(int pos) const {
    size_t i = static_cast<size_t>(std::min<int>(pos, static_cast<int>(cfg_.position_cost_ms.size()) - 1));
    return cfg_.position_cost_ms[i] + cfg_.injected_load_ms;
}

void RefServer::send(LineChannel& channel, MsgKind kind, nlohmann::json payload) {
    channel.write_line(serialize_message({kind, seq_++, std::move(payload)}));
}

void RefServer::serve(LineChannel& channel) {
    std::string line;
    while (channel.read_line(line, -1)) {
        ProtocolMessage m;
        try {
            m = parse_message(line);
        } catch (const ProtocolError& e) {
            send(channel, MsgKind::Error, {{"message", e.what()}});
            continue;
        }
        switch (m.kind) {
            case MsgKind::Hello: {
                int version = m.payload.value("version", -1);
                if (version != kProtocolVersion) {
                    send(channel, MsgKind::Error,
                         {{"message", "version mismatch: server speaks " + std::to_string(kProtocolVersion)}});
                    break;
                }
                send(channel, MsgKind::Spec,
                     {{"version", kProtocolVersion},
                      {"name", "refserver-corridor"},
                      {"action_count", 2},
                      {"observation_shape", std::vector<int>{1}},
                      {"max_episode_steps", cfg_.max_episode_steps},
                      {"frames_per_action", 4}});
                break;
            }
            case MsgKind::Reset: {
                pos_ = 0;
                steps_ = 0;
                episode_active_ = true;
                send(channel, MsgKind::Observe,
                     {{"values", std::vector<double>{0.0}}, {"shape", std::vector<int>{1}}});
                break;
            }
            case MsgKind::Act: {
                if (!episode_active_) {
                    send(channel, MsgKind::Error, {{"message", "act outside an active episode"}});
                    break;
                }
                int action = m.payload.value("action", -1);
                int prev = pos_;
                if (action == 1) pos_ = std::min(pos_ + 1, cfg_.corridor_length);
                else pos_ = std::max(pos_ - 1, 0);
                ++steps_;
                bool finished = pos_ == cfg_.corridor_length;
                bool terminal = finished || steps_ >= cfg_.max_episode_steps;
                send(channel, MsgKind::Observe,
                     {{"values", std::vector<double>{static_cast<double>(pos_) / cfg_.corridor_length}},
                      {"shape", std::vector<int>{1}}});
                if (finished) send(channel, MsgKind::Event, {{"finished", true}});
                send(channel, MsgKind::Timing,
                     {{"rt_ms", cost_at(pos_)},
                      {"x", 0.0},
                      {"y", static_cast<double>(pos_)},
                      {"centering_raw", 0.0},
                      {"progress_delta", static_cast<double>(pos_ - prev)},
                      {"terminal", terminal}});
                if (terminal) {
                    send(channel, MsgKind::EpisodeEnd, nlohmann::json::object());
                    episode_active_ = false;
                }
                break;
            }
            default:
                send(channel, MsgKind::Error,
                     {{"message", "unexpected " + kind_to_string(m.kind) + " message"}});
        }
    }
}

}  // namespace reline::adapter
