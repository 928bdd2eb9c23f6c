#include "reline/replay_buffer.hpp"

#include <stdexcept>

namespace reline {

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
    if (capacity <= 0) throw std::invalid_argument("replay: capacity must be positive");
    entries_.reserve(static_cast<size_t>(capacity));
}

void ReplayBuffer::push(ExperienceInstance instance) {
    if (static_cast<int>(entries_.size()) < capacity_) {
        entries_.push_back(std::move(instance));
    } else {
        entries_[head_] = std::move(instance);
        head_ = (head_ + 1) % static_cast<size_t>(capacity_);
    }
}

const ExperienceInstance& ReplayBuffer::at(int i) const {
    if (i < 0 || i >= size()) throw std::out_of_range("replay: index");
    if (static_cast<int>(entries_.size()) < capacity_) return entries_[static_cast<size_t>(i)];
    return entries_[(head_ + static_cast<size_t>(i)) % static_cast<size_t>(capacity_)];
}

std::vector<const ExperienceInstance*> ReplayBuffer::sample(int batch_size, Rng& rng) const {
    if (entries_.empty()) throw std::logic_error("replay: sample from empty buffer");
    std::vector<const ExperienceInstance*> out;
    out.reserve(static_cast<size_t>(batch_size));
    for (int i = 0; i < batch_size; ++i)
        out.push_back(&entries_[static_cast<size_t>(uniform_int(rng, 0, size() - 1))]);
    return out;
}

}  // namespace reline
