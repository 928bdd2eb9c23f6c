#pragma once

#include <vector>

#include "reline/line_channel.hpp"
#include "reline/protocol.hpp"

namespace reline::adapter {

// Scripted mini-game test fixture: a 1-D corridor the agent walks by choosing
// back (0) / forward (1). Each position has a fixed rendering cost; extra
// load can be injected to emulate training-time inflation.
struct RefServerConfig {
    int corridor_length = 20;
    int max_episode_steps = 60;
    std::vector<double> position_cost_ms;  // empty -> flat 10 ms
    double injected_load_ms = 0.0;
};

class RefServer {
public:
    explicit RefServer(RefServerConfig cfg = {});

    void inject_load(double extra_ms) { cfg_.injected_load_ms = extra_ms; }
    const RefServerConfig& config() const { return cfg_; }

    // Serves one client until it disconnects.
    void serve(LineChannel& channel);

private:
    void send(LineChannel& channel, MsgKind kind, nlohmann::json payload);
    double cost_at(int pos) const;

    RefServerConfig cfg_;
    uint64_t seq_ = 0;
    int pos_ = 0;
    int steps_ = 0;
    bool episode_active_ = false;
};

}  // namespace reline::adapter
