#pragma once

#include <array>
#include <deque>
#include <set>

#include "reline/cost_field.hpp"
#include "reline/env.hpp"

namespace reline {

// Grid maze with dots, scripted-patrol ghosts, and gate cells that emit a
// bug event the first time they are entered in an episode.
// Cell legend for layout rows: '#' wall, '.' dot, ' ' empty, 'G' gate,
// 'P' agent start, 'g' ghost patrol anchor.
struct DotMazeConfig {
    std::vector<std::string> layout;  // empty -> built-in 15x15 maze
    int max_episode_steps = 400;
    int ghost_count = 1;
    int frame_stack_depth = 4;
    RenderCostField cost_field;
};

class DotMazeEnv final : public Environment {
public:
    explicit DotMazeEnv(DotMazeConfig cfg = {});

    const EnvSpec& spec() const override { return spec_; }
    GameObservation reset(uint64_t seed) override;
    StepResult step(int action) override;  // 0 up, 1 right, 2 down, 3 left, 4 noop
    bool terminal() const override { return terminal_; }
    int steps_taken() const override { return steps_; }

    int width() const { return w_; }
    int height() const { return h_; }
    bool wall(int cx, int cy) const { return walls_[idx(cx, cy)]; }
    std::pair<int, int> agent_pos() const { return {ax_, ay_}; }
    std::pair<int, int> ghost_pos(int i) const { return ghosts_[static_cast<size_t>(i)].pos(); }
    int dots_left() const { return dots_left_; }
    int gate_count() const { return static_cast<int>(gates_.size()); }

    static std::vector<std::string> default_layout();

private:
    struct Ghost {
        std::vector<std::pair<int, int>> route;  // precomputed patrol cycle
        size_t phase = 0;
        std::pair<int, int> pos() const { return route[phase]; }
        void advance() { phase = (phase + 1) % route.size(); }
    };

    size_t idx(int cx, int cy) const { return static_cast<size_t>(cy * w_ + cx); }
    GameObservation observe();
    Tensor render_frame() const;
    bool ghost_hit() const;

    DotMazeConfig cfg_;
    EnvSpec spec_;
    int w_ = 0, h_ = 0;
    std::vector<char> walls_;
    std::vector<char> dots_init_;
    std::vector<char> dots_;
    std::vector<std::pair<int, int>> gates_;
    std::vector<char> gate_open_;  // untriggered flags, per gate
    int start_x_ = 0, start_y_ = 0;
    std::vector<std::pair<int, int>> ghost_anchors_;
    std::vector<Ghost> ghosts_;
    int ax_ = 0, ay_ = 0;
    int dots_left_ = 0;
    std::deque<Tensor> frames_;
    Rng rng_;
    bool terminal_ = true;
    int steps_ = 0;
};

}  // namespace reline
