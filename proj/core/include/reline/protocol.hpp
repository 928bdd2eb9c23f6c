#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace reline::adapter {

constexpr int kProtocolVersion = 1;

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MsgKind { Hello, Spec, Reset, Observe, Act, Timing, Event, EpisodeEnd, Error };

std::string kind_to_string(MsgKind k);
MsgKind kind_from_string(const std::string& s);

struct ProtocolMessage {
    MsgKind kind = MsgKind::Hello;
    uint64_t sequence = 0;
    nlohmann::json payload = nlohmann::json::object();
};

std::string serialize_message(const ProtocolMessage& m);
ProtocolMessage parse_message(const std::string& line);

}  // namespace reline::adapter
