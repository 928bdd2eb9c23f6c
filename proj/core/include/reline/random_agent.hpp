#pragma once

#include "reline/env.hpp"
#include "reline/rng.hpp"

namespace reline {

inline int random_agent_act(const EnvSpec& spec, Rng& rng) {
    return uniform_int(rng, 0, spec.action_count - 1);
}

}  // namespace reline
