#pragma once

#include <memory>

#include "reline/env.hpp"
#include "reline/line_channel.hpp"
#include "reline/protocol.hpp"

namespace reline::adapter {

// Environment backed by an external game process speaking the line protocol.
// Message order per episode: reset -> (observe -> act -> timing/event)* ->
// episode_end. The handshake runs in the constructor.
class RemoteEnv final : public Environment {
public:
    explicit RemoteEnv(std::unique_ptr<LineChannel> channel, int timeout_ms = 5000);

    const EnvSpec& spec() const override { return spec_; }
    GameObservation reset(uint64_t seed) override;
    StepResult step(int action) override;
    bool terminal() const override { return terminal_; }
    int steps_taken() const override { return steps_; }

private:
    ProtocolMessage read_message();
    void send(MsgKind kind, nlohmann::json payload);
    GameObservation parse_observe(const ProtocolMessage& m) const;

    std::unique_ptr<LineChannel> channel_;
    int timeout_ms_;
    EnvSpec spec_;
    uint64_t send_seq_ = 0;
    uint64_t last_recv_seq_ = 0;
    bool have_recv_ = false;
    bool terminal_ = true;
    int steps_ = 0;
};

EnvSpec handshake(LineChannel& channel, uint64_t& send_seq, int timeout_ms);

}  // namespace reline::adapter
