#include "reline/protocol.hpp"

namespace reline::adapter {

std::string kind_to_string(MsgKind k) {
    switch (k) {
        case MsgKind::Hello: return "hello";
        case MsgKind::Spec: return "spec";
        case MsgKind::Reset: return "reset";
        case MsgKind::Observe: return "observe";
        case MsgKind::Act: return "act";
        case MsgKind::Timing: return "timing";
        case MsgKind::Event: return "event";
        case MsgKind::EpisodeEnd: return "episode_end";
        case MsgKind::Error: return "error";
    }
    throw ProtocolError("protocol: unknown kind enum");
}

MsgKind kind_from_string(const std::string& s) {
    if (s == "hello") return MsgKind::Hello;
    if (s == "spec") return MsgKind::Spec;
    if (s == "reset") return MsgKind::Reset;
    if (s == "observe") return MsgKind::Observe;
    if (s == "act") return MsgKind::Act;
    if (s == "timing") return MsgKind::Timing;
    if (s == "event") return MsgKind::Event;
    if (s == "episode_end") return MsgKind::EpisodeEnd;
    if (s == "error") return MsgKind::Error;
    throw ProtocolError("protocol: unknown message kind '" + s + "'");
}

std::string serialize_message(const ProtocolMessage& m) {
    nlohmann::ordered_json j;
    j["kind"] = kind_to_string(m.kind);
    j["seq"] = m.sequence;
    j["payload"] = m.payload;
    return j.dump();
}

ProtocolMessage parse_message(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("protocol: malformed message: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("seq") || !j.contains("payload"))
        throw ProtocolError("protocol: message missing kind/seq/payload");
    ProtocolMessage m;
    m.kind = kind_from_string(j["kind"].get<std::string>());
    if (!j["seq"].is_number_unsigned()) throw ProtocolError("protocol: seq must be a non-negative integer");
    m.sequence = j["seq"].get<uint64_t>();
    m.payload = j["payload"];
    return m;
}

}  // namespace reline::adapter
