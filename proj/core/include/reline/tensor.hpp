#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace reline {

// Dense row-major tensor of doubles. Shapes are small (RL nets, grid
// observations), so everything lives in one flat vector.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(static_cast<size_t>(count(shape)), 0.0);
    }
    Tensor(std::vector<int> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != static_cast<size_t>(count(shape)))
            throw std::invalid_argument("tensor: data size does not match shape");
    }

    static long count(const std::vector<int>& s) {
        long n = 1;
        for (int d : s) n *= d;
        return n;
    }

    long size() const { return static_cast<long>(data.size()); }
    double& operator[](long i) { return data[static_cast<size_t>(i)]; }
    double operator[](long i) const { return data[static_cast<size_t>(i)]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

bool all_finite(const Tensor& t);

}  // namespace reline
