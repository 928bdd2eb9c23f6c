#include "reline/tensor.hpp"

#include <cmath>

namespace reline {

bool all_finite(const Tensor& t) {
    for (double v : t.data)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace reline
