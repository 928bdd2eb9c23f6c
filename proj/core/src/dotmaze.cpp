#include "reline/dotmaze.hpp"

#include <algorithm>
#include <stdexcept>

namespace reline {

std::vector<std::string> DotMazeEnv::default_layout() {
    return {
        "###############",
        "#G....#....#.G#",
        "##.##.#.##.#.##",
        "#..#.......#..#",
        "#.##.#####.##.#",
        "#....#...#..P.#",
        "#.##.#.#.#.##.#",
        "#..#...#...#..#",
        "#.##.#.#.#.##.#",
        "#....#.#.#....#",
        "#.##.#####.##.#",
        "#..#...g...#..#",
        "##.##.#.##.#.##",
        "#G....#....#.G#",
        "###############",
    };
}

DotMazeEnv::DotMazeEnv(DotMazeConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.layout.empty()) cfg_.layout = default_layout();
    h_ = static_cast<int>(cfg_.layout.size());
    w_ = static_cast<int>(cfg_.layout[0].size());
    walls_.assign(static_cast<size_t>(w_ * h_), 0);
    dots_init_.assign(static_cast<size_t>(w_ * h_), 0);
    for (int cy = 0; cy < h_; ++cy) {
        const std::string& row = cfg_.layout[static_cast<size_t>(cy)];
        if (static_cast<int>(row.size()) != w_) throw std::invalid_argument("dotmaze: ragged layout");
        for (int cx = 0; cx < w_; ++cx) {
            char c = row[static_cast<size_t>(cx)];
            switch (c) {
                case '#': walls_[idx(cx, cy)] = 1; break;
                case '.': dots_init_[idx(cx, cy)] = 1; break;
                case 'G': gates_.emplace_back(cx, cy); break;
                case 'P': start_x_ = cx; start_y_ = cy; break;
                case 'g': ghost_anchors_.emplace_back(cx, cy); break;
                case ' ': break;
                default: throw std::invalid_argument("dotmaze: bad layout char");
            }
        }
    }
    if (gates_.empty()) throw std::invalid_argument("dotmaze: layout has no gates");

    spec_.name = "dotmaze";
    spec_.action_count = 5;
    spec_.observation_shape = {cfg_.frame_stack_depth, h_, w_};
    spec_.max_episode_steps = cfg_.max_episode_steps;
    spec_.frames_per_action = cfg_.frame_stack_depth;
}

GameObservation DotMazeEnv::reset(uint64_t seed) {
    rng_.seed(seed);
    dots_ = dots_init_;
    dots_left_ = static_cast<int>(std::count(dots_.begin(), dots_.end(), 1));
    gate_open_.assign(gates_.size(), 1);
    ax_ = start_x_;
    ay_ = start_y_;

    ghosts_.clear();
    int n_ghosts = std::min<int>(cfg_.ghost_count, static_cast<int>(ghost_anchors_.size()));
    for (int g = 0; g < n_ghosts; ++g) {
        auto [gx, gy] = ghost_anchors_[static_cast<size_t>(g)];
        // patrol the contiguous horizontal corridor through the anchor
        int lo = gx, hi = gx;
        while (lo - 1 > 0 && !wall(lo - 1, gy)) --lo;
        while (hi + 1 < w_ - 1 && !wall(hi + 1, gy)) ++hi;
        Ghost ghost;
        for (int cx = lo; cx <= hi; ++cx) ghost.route.emplace_back(cx, gy);
        for (int cx = hi - 1; cx > lo; --cx) ghost.route.emplace_back(cx, gy);
        ghost.phase = static_cast<size_t>(uniform_int(rng_, 0, static_cast<int>(ghost.route.size()) - 1));
        ghosts_.push_back(std::move(ghost));
    }

    terminal_ = false;
    steps_ = 0;
    frames_.clear();
    Tensor f = render_frame();
    for (int i = 0; i < cfg_.frame_stack_depth; ++i) frames_.push_back(f);
    return observe();
}

Tensor DotMazeEnv::render_frame() const {
    Tensor f({h_, w_});
    for (int cy = 0; cy < h_; ++cy)
        for (int cx = 0; cx < w_; ++cx) {
            double v = 0.0;
            if (walls_[idx(cx, cy)]) v = -1.0;
            else if (dots_[idx(cx, cy)]) v = 0.25;
            f[cy * w_ + cx] = v;
        }
    for (size_t g = 0; g < gates_.size(); ++g)
        if (gate_open_[g]) f[gates_[g].second * w_ + gates_[g].first] = 0.5;
    for (const auto& ghost : ghosts_) {
        auto [gx, gy] = ghost.pos();
        f[gy * w_ + gx] = -0.75;
    }
    f[ay_ * w_ + ax_] = 1.0;
    return f;
}

GameObservation DotMazeEnv::observe() {
    Tensor obs({cfg_.frame_stack_depth, h_, w_});
    long plane = static_cast<long>(h_) * w_;
    for (int i = 0; i < cfg_.frame_stack_depth; ++i)
        std::copy(frames_[static_cast<size_t>(i)].data.begin(), frames_[static_cast<size_t>(i)].data.end(),
                  obs.data.begin() + i * plane);
    return {std::move(obs), cfg_.frame_stack_depth};
}

bool DotMazeEnv::ghost_hit() const {
    for (const auto& g : ghosts_)
        if (g.pos() == std::make_pair(ax_, ay_)) return true;
    return false;
}

StepResult DotMazeEnv::step(int action) {
    if (terminal_) throw std::logic_error("dotmaze: step on terminal state");
    static constexpr int dx[5] = {0, 1, 0, -1, 0};
    static constexpr int dy[5] = {-1, 0, 1, 0, 0};
    if (action < 0 || action > 4) throw std::logic_error("dotmaze: bad action");

    StepResult r;
    int nx = ax_ + dx[action], ny = ay_ + dy[action];
    std::pair<int, int> prev{ax_, ay_};
    if (!wall(nx, ny)) {
        ax_ = nx;
        ay_ = ny;
    }
    if (dots_[idx(ax_, ay_)]) {
        dots_[idx(ax_, ay_)] = 0;
        --dots_left_;
        r.events.dots_eaten = 1;
    }
    for (size_t g = 0; g < gates_.size(); ++g)
        if (gate_open_[g] && gates_[g] == std::make_pair(ax_, ay_)) {
            gate_open_[g] = 0;
            r.events.bugs_triggered.push_back("gate-" + std::to_string(g));
        }

    bool dead = ghost_hit();
    if (!dead) {
        for (auto& ghost : ghosts_) {
            auto before = ghost.pos();
            ghost.advance();
            // swap-through also counts as contact
            if (ghost.pos() == std::make_pair(ax_, ay_) || (before == std::make_pair(ax_, ay_) && ghost.pos() == prev))
                dead = true;
        }
    }
    ++steps_;
    terminal_ = dead || dots_left_ == 0 || steps_ >= cfg_.max_episode_steps;
    r.events.finished = dots_left_ == 0;
    r.events.terminal = terminal_;
    r.step_survived = !dead;

    frames_.pop_front();
    frames_.push_back(render_frame());
    r.observation = observe();
    r.x = ax_;
    r.y = ay_;
    r.timing = {r.x, r.y, cfg_.cost_field.sample(r.x, r.y, rng_)};
    return r;
}

}  // namespace reline
