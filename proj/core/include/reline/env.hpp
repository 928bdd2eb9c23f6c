#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reline/tensor.hpp"

namespace reline {

struct EnvSpec {
    std::string name;
    int action_count = 2;
    std::vector<int> observation_shape;
    int max_episode_steps = 1000;
    std::optional<int> episode_time_limit_ms;
    int frames_per_action = 4;
};

struct GameObservation {
    Tensor values;
    int frame_stack_depth = 1;
};

// Rendering time in milliseconds for the frames following one action,
// attached to the coordinate at which it was measured.
struct FrameTimingSample {
    double x = 0.0;
    double y = 0.0;
    double rt_ms = 0.0;
};

struct BugZone {
    std::string id;
    double lo = 0.0;  // closed interval on the relevant coordinate
    double hi = 0.0;
    bool triggered_this_episode = false;

    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct GameEvents {
    std::vector<std::string> bugs_triggered;
    int dots_eaten = 0;
    bool finished = false;
    bool terminal = false;
};

struct StepResult {
    GameObservation observation;
    GameEvents events;
    FrameTimingSample timing;
    double x = 0.0;  // current point coordinate (normalized scale)
    double y = 0.0;
    bool step_survived = true;   // cartpole game reward input
    double progress_delta = 0.0; // racesim delta-y in raw units
    double centering_raw = 0.0;  // racesim centering in reward units
};

class Environment {
public:
    virtual ~Environment() = default;
    virtual const EnvSpec& spec() const = 0;
    virtual GameObservation reset(uint64_t seed) = 0;
    // Throws std::logic_error when called on a terminal state.
    virtual StepResult step(int action) = 0;
    virtual bool terminal() const = 0;
    virtual int steps_taken() const = 0;
};

// First time each untriggered zone contains x, its id is returned and the
// zone is marked triggered for the rest of the episode.
std::vector<std::string> bug_check(double x, std::vector<BugZone>& zones);

}  // namespace reline
