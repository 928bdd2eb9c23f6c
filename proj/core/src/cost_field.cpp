#include "reline/cost_field.hpp"

#include <cmath>

namespace reline {

double RenderCostField::eval(double x, double y) const {
    double cost = base_cost_ms;
    for (const auto& h : hotspots) {
        double dx = x - h.cx;
        double dy = y - h.cy;
        double d2 = dx * dx + dy * dy;
        cost += h.peak_ms * std::exp(-0.5 * d2 / (h.radius * h.radius));
    }
    return cost;
}

double RenderCostField::sample(double x, double y, Rng& rng) const {
    double cost = eval(x, y);
    if (noise_stddev_ms > 0.0) cost += gaussian(rng, 0.0, noise_stddev_ms);
    // keep samples positive even under extreme noise draws
    return cost > 0.0 ? cost : 0.0;
}

}  // namespace reline
