#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reline/rng.hpp"
#include "reline/tensor.hpp"

namespace reline::nn {

enum class LayerKind { Dense, Conv, Relu };

struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    // dense
    int in = 0, out = 0;
    // conv (no padding)
    int in_c = 0, out_c = 0, kernel = 0, stride = 1, in_h = 0, in_w = 0;

    static LayerSpec dense(int in, int out) { return {LayerKind::Dense, in, out, 0, 0, 0, 1, 0, 0}; }
    static LayerSpec conv(int in_c, int out_c, int kernel, int stride, int in_h, int in_w) {
        return {LayerKind::Conv, 0, 0, in_c, out_c, kernel, stride, in_h, in_w};
    }
    static LayerSpec relu() { return {LayerKind::Relu}; }

    int out_h() const { return (in_h - kernel) / stride + 1; }
    int out_w() const { return (in_w - kernel) / stride + 1; }
};

struct NetworkSpec {
    std::vector<LayerSpec> layers;
    uint64_t init_seed = 0;
};

// Per-layer weight/bias tensors; relu layers hold empty tensors.
struct ParameterSet {
    std::vector<Tensor> weights;
    std::vector<Tensor> biases;

    void add_scaled(const ParameterSet& g, double scale);
    void fill(double v);
};

struct ForwardCache {
    std::vector<Tensor> activations;  // activations[0] = input, one per layer after
    bool valid = false;
};

class Network {
public:
    Network() = default;
    explicit Network(NetworkSpec spec);

    const NetworkSpec& spec() const { return spec_; }
    ParameterSet& params() { return params_; }
    const ParameterSet& params() const { return params_; }

    Tensor forward(const Tensor& input, ForwardCache* cache = nullptr) const;
    // Gradient of the loss w.r.t. every parameter given d(loss)/d(output).
    ParameterSet backward(const ForwardCache& cache, const Tensor& output_grad) const;

    ParameterSet zero_like() const;
    void sgd_step(const ParameterSet& grads, double lr, double momentum = 0.0);

    int output_size() const;
    std::vector<int> input_shape() const;

    void save(std::ostream& os) const;
    static Network load(std::istream& is);
    void save_file(const std::string& path) const;
    static Network load_file(const std::string& path);

private:
    NetworkSpec spec_;
    ParameterSet params_;
    ParameterSet velocity_;
    bool has_velocity_ = false;
};

// loss = -log softmax(logits)[target]; grad = softmax(logits) - onehot(target)
std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int target);

Tensor softmax(const Tensor& logits);

}  // namespace reline::nn
