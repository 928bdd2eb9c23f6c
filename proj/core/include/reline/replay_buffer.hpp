#pragma once

#include <vector>

#include "reline/rng.hpp"
#include "reline/tensor.hpp"

namespace reline {

// The quadruple (s_{tau-1}, a_tau, s_tau, r_tau) plus the terminal flag the
// Q-target needs to drop its bootstrap term.
struct ExperienceInstance {
    Tensor prev_state;
    int action = 0;
    Tensor next_state;
    double reward = 0.0;
    bool next_terminal = false;
};

// Fixed-capacity ring; eviction is oldest-first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity);

    void push(ExperienceInstance instance);
    int size() const { return static_cast<int>(entries_.size()); }
    int capacity() const { return capacity_; }
    const ExperienceInstance& at(int i) const;  // 0 = oldest

    // Uniform sample with replacement.
    std::vector<const ExperienceInstance*> sample(int batch_size, Rng& rng) const;

private:
    int capacity_;
    size_t head_ = 0;  // next write slot once full
    std::vector<ExperienceInstance> entries_;
};

}  // namespace reline
