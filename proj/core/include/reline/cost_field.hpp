#pragma once

#include <vector>

#include "reline/rng.hpp"

namespace reline {

struct Hotspot {
    double cx = 0.0;
    double cy = 0.0;
    double peak_ms = 0.0;
    double radius = 1.0;
};

// Synthetic per-coordinate rendering cost: a flat base plus Gaussian-decay
// hotspots, cost(p) = base + sum_k peak_k * exp(-0.5 * (d_k / radius_k)^2),
// optionally perturbed by seeded Gaussian noise.
struct RenderCostField {
    double base_cost_ms = 5.0;
    std::vector<Hotspot> hotspots;
    double noise_stddev_ms = 0.0;

    double eval(double x, double y) const;
    double sample(double x, double y, Rng& rng) const;
};

}  // namespace reline
