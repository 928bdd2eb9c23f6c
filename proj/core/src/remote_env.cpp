#include "reline/remote_env.hpp"

namespace reline::adapter {

static EnvSpec parse_spec(const nlohmann::json& p) {
    EnvSpec spec;
    if (!p.contains("name")) throw ProtocolError("protocol: spec missing field 'name'");
    if (!p.contains("action_count")) throw ProtocolError("protocol: spec missing field 'action_count'");
    if (!p.contains("observation_shape")) throw ProtocolError("protocol: spec missing field 'observation_shape'");
    spec.name = p["name"].get<std::string>();
    spec.action_count = p["action_count"].get<int>();
    spec.observation_shape = p["observation_shape"].get<std::vector<int>>();
    spec.max_episode_steps = p.value("max_episode_steps", 1000);
    spec.frames_per_action = p.value("frames_per_action", 4);
    if (spec.action_count < 2) throw ProtocolError("protocol: spec action_count must be >= 2");
    return spec;
}

EnvSpec handshake(LineChannel& channel, uint64_t& send_seq, int timeout_ms) {
    ProtocolMessage hello{MsgKind::Hello, send_seq++, {{"version", kProtocolVersion}}};
    channel.write_line(serialize_message(hello));
    std::string line;
    if (!channel.read_line(line, timeout_ms)) throw ProtocolError("protocol: peer closed during handshake");
    ProtocolMessage reply = parse_message(line);
    if (reply.kind == MsgKind::Error)
        throw ProtocolError("protocol: peer error: " + reply.payload.value("message", std::string()));
    if (reply.kind != MsgKind::Spec) throw ProtocolError("protocol: expected spec after hello");
    int version = reply.payload.value("version", kProtocolVersion);
    if (version != kProtocolVersion)
        throw ProtocolError("protocol: version mismatch (peer " + std::to_string(version) + ")");
    return parse_spec(reply.payload);
}

RemoteEnv::RemoteEnv(std::unique_ptr<LineChannel> channel, int timeout_ms)
    : channel_(std::move(channel)), timeout_ms_(timeout_ms) {
    spec_ = handshake(*channel_, send_seq_, timeout_ms_);
}

void RemoteEnv::send(MsgKind kind, nlohmann::json payload) {
    channel_->write_line(serialize_message({kind, send_seq_++, std::move(payload)}));
}

ProtocolMessage RemoteEnv::read_message() {
    std::string line;
    bool ok;
    try {
        ok = channel_->read_line(line, timeout_ms_);
    } catch (const ChannelTimeout&) {
        throw ProtocolError("protocol: timeout waiting for message (last seq " +
                            std::to_string(last_recv_seq_) + ")");
    }
    if (!ok) throw ProtocolError("protocol: peer closed connection");
    ProtocolMessage m = parse_message(line);
    if (have_recv_ && m.sequence <= last_recv_seq_)
        throw ProtocolError("protocol: non-increasing sequence " + std::to_string(m.sequence));
    last_recv_seq_ = m.sequence;
    have_recv_ = true;
    if (m.kind == MsgKind::Error)
        throw ProtocolError("protocol: peer error: " + m.payload.value("message", std::string()));
    return m;
}

GameObservation RemoteEnv::parse_observe(const ProtocolMessage& m) const {
    if (!m.payload.contains("values")) throw ProtocolError("protocol: observe missing field 'values'");
    GameObservation obs;
    std::vector<int> shape = m.payload.value("shape", spec_.observation_shape);
    obs.values = Tensor(shape, m.payload["values"].get<std::vector<double>>());
    obs.frame_stack_depth = m.payload.value("frame_stack_depth", 1);
    return obs;
}

GameObservation RemoteEnv::reset(uint64_t seed) {
    send(MsgKind::Reset, {{"seed", seed}});
    ProtocolMessage m = read_message();
    if (m.kind != MsgKind::Observe) throw ProtocolError("protocol: expected observe after reset");
    terminal_ = false;
    steps_ = 0;
    return parse_observe(m);
}

StepResult RemoteEnv::step(int action) {
    if (terminal_) throw std::logic_error("remote env: step on terminal state");
    send(MsgKind::Act, {{"action", action}});

    StepResult r;
    bool have_observe = false, have_timing = false;
    while (!have_timing) {
        ProtocolMessage m = read_message();
        switch (m.kind) {
            case MsgKind::Observe:
                if (have_observe) throw ProtocolError("protocol: duplicate observe in step");
                r.observation = parse_observe(m);
                have_observe = true;
                break;
            case MsgKind::Event:
                r.events.bugs_triggered = m.payload.value("bugs", std::vector<std::string>{});
                r.events.dots_eaten = m.payload.value("dots_eaten", 0);
                r.events.finished = m.payload.value("finished", false);
                break;
            case MsgKind::Timing:
                if (!have_observe) throw ProtocolError("protocol: timing before observe");
                if (!m.payload.contains("rt_ms")) throw ProtocolError("protocol: timing missing field 'rt_ms'");
                r.timing.rt_ms = m.payload["rt_ms"].get<double>();
                r.x = r.timing.x = m.payload.value("x", 0.0);
                r.y = r.timing.y = m.payload.value("y", 0.0);
                r.centering_raw = m.payload.value("centering_raw", r.x);
                r.progress_delta = m.payload.value("progress_delta", 0.0);
                r.events.terminal = m.payload.value("terminal", false);
                have_timing = true;
                break;
            case MsgKind::EpisodeEnd:
                throw ProtocolError("protocol: episode_end before timing");
            default:
                throw ProtocolError("protocol: unexpected " + kind_to_string(m.kind) + " during step");
        }
    }
    if (r.events.terminal) {
        terminal_ = true;
        ProtocolMessage end = read_message();
        if (end.kind != MsgKind::EpisodeEnd)
            throw ProtocolError("protocol: expected episode_end after terminal timing");
    }
    ++steps_;
    return r;
}

}  // namespace reline::adapter
