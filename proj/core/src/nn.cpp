#include "reline/nn.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace reline::nn {

void ParameterSet::add_scaled(const ParameterSet& g, double scale) {
    for (size_t l = 0; l < weights.size(); ++l) {
        for (long i = 0; i < weights[l].size(); ++i) weights[l][i] += scale * g.weights[l][i];
        for (long i = 0; i < biases[l].size(); ++i) biases[l][i] += scale * g.biases[l][i];
    }
}

void ParameterSet::fill(double v) {
    for (auto& w : weights) std::fill(w.data.begin(), w.data.end(), v);
    for (auto& b : biases) std::fill(b.data.begin(), b.data.end(), v);
}

static void validate_spec(const NetworkSpec& spec) {
    if (spec.layers.empty()) throw std::invalid_argument("nn: empty network spec");
    bool trainable = false;
    for (const auto& l : spec.layers) {
        if (l.kind == LayerKind::Dense) {
            if (l.in <= 0 || l.out <= 0) throw std::invalid_argument("nn: bad dense dims");
            trainable = true;
        } else if (l.kind == LayerKind::Conv) {
            if (l.in_c <= 0 || l.out_c <= 0 || l.kernel <= 0 || l.stride <= 0 || l.out_h() <= 0 || l.out_w() <= 0)
                throw std::invalid_argument("nn: bad conv dims");
            trainable = true;
        }
    }
    if (!trainable) throw std::invalid_argument("nn: no trainable layer");
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    validate_spec(spec_);
    Rng rng(spec_.init_seed);
    for (const auto& l : spec_.layers) {
        Tensor w, b;
        if (l.kind == LayerKind::Dense) {
            w = Tensor({l.out, l.in});
            b = Tensor({l.out});
            double s = std::sqrt(1.0 / l.in);
            for (auto& v : w.data) v = (uniform01(rng) * 2.0 - 1.0) * s;
        } else if (l.kind == LayerKind::Conv) {
            w = Tensor({l.out_c, l.in_c, l.kernel, l.kernel});
            b = Tensor({l.out_c});
            double s = std::sqrt(1.0 / (l.in_c * l.kernel * l.kernel));
            for (auto& v : w.data) v = (uniform01(rng) * 2.0 - 1.0) * s;
        }
        params_.weights.push_back(std::move(w));
        params_.biases.push_back(std::move(b));
    }
}

static Tensor dense_forward(const LayerSpec& l, const Tensor& w, const Tensor& b, const Tensor& in) {
    if (in.size() != l.in) throw std::invalid_argument("nn: dense input shape mismatch");
    Tensor out({l.out});
    for (int o = 0; o < l.out; ++o) {
        double acc = b[o];
        const double* wr = w.data.data() + static_cast<size_t>(o) * l.in;
        for (int i = 0; i < l.in; ++i) acc += wr[i] * in[i];
        out[o] = acc;
    }
    return out;
}

static Tensor conv_forward(const LayerSpec& l, const Tensor& w, const Tensor& b, const Tensor& in) {
    if (in.size() != static_cast<long>(l.in_c) * l.in_h * l.in_w)
        throw std::invalid_argument("nn: conv input shape mismatch");
    int oh = l.out_h(), ow = l.out_w();
    Tensor out({l.out_c, oh, ow});
    for (int oc = 0; oc < l.out_c; ++oc)
        for (int yy = 0; yy < oh; ++yy)
            for (int xx = 0; xx < ow; ++xx) {
                double acc = b[oc];
                for (int ic = 0; ic < l.in_c; ++ic)
                    for (int ky = 0; ky < l.kernel; ++ky)
                        for (int kx = 0; kx < l.kernel; ++kx) {
                            double iv = in[(static_cast<long>(ic) * l.in_h + (yy * l.stride + ky)) * l.in_w +
                                           (xx * l.stride + kx)];
                            double wv = w[((static_cast<long>(oc) * l.in_c + ic) * l.kernel + ky) * l.kernel + kx];
                            acc += iv * wv;
                        }
                out[(static_cast<long>(oc) * oh + yy) * ow + xx] = acc;
            }
    return out;
}

Tensor Network::forward(const Tensor& input, ForwardCache* cache) const {
    Tensor cur = input;
    if (cache) {
        cache->activations.clear();
        cache->activations.push_back(cur);
        cache->valid = true;
    }
    for (size_t li = 0; li < spec_.layers.size(); ++li) {
        const auto& l = spec_.layers[li];
        switch (l.kind) {
            case LayerKind::Dense: cur = dense_forward(l, params_.weights[li], params_.biases[li], cur); break;
            case LayerKind::Conv: cur = conv_forward(l, params_.weights[li], params_.biases[li], cur); break;
            case LayerKind::Relu: {
                Tensor out = cur;
                for (auto& v : out.data) v = v > 0.0 ? v : 0.0;
                cur = std::move(out);
                break;
            }
        }
        if (cache) cache->activations.push_back(cur);
    }
    return cur;
}

ParameterSet Network::backward(const ForwardCache& cache, const Tensor& output_grad) const {
    if (!cache.valid || cache.activations.size() != spec_.layers.size() + 1)
        throw std::logic_error("nn: backward without a recorded forward pass");
    ParameterSet grads = zero_like();
    Tensor grad = output_grad;
    for (size_t li = spec_.layers.size(); li-- > 0;) {
        const auto& l = spec_.layers[li];
        const Tensor& in = cache.activations[li];
        if (l.kind == LayerKind::Dense) {
            Tensor gin({static_cast<int>(in.size())});
            for (int o = 0; o < l.out; ++o) {
                double go = grad[o];
                grads.biases[li][o] += go;
                double* gw = grads.weights[li].data.data() + static_cast<size_t>(o) * l.in;
                const double* wr = params_.weights[li].data.data() + static_cast<size_t>(o) * l.in;
                for (int i = 0; i < l.in; ++i) {
                    gw[i] += go * in[i];
                    gin[i] += go * wr[i];
                }
            }
            grad = std::move(gin);
        } else if (l.kind == LayerKind::Conv) {
            int oh = l.out_h(), ow = l.out_w();
            Tensor gin(in.shape.empty() ? std::vector<int>{static_cast<int>(in.size())} : in.shape);
            for (int oc = 0; oc < l.out_c; ++oc)
                for (int yy = 0; yy < oh; ++yy)
                    for (int xx = 0; xx < ow; ++xx) {
                        double go = grad[(static_cast<long>(oc) * oh + yy) * ow + xx];
                        grads.biases[li][oc] += go;
                        for (int ic = 0; ic < l.in_c; ++ic)
                            for (int ky = 0; ky < l.kernel; ++ky)
                                for (int kx = 0; kx < l.kernel; ++kx) {
                                    long ii = (static_cast<long>(ic) * l.in_h + (yy * l.stride + ky)) * l.in_w +
                                              (xx * l.stride + kx);
                                    long wi = ((static_cast<long>(oc) * l.in_c + ic) * l.kernel + ky) * l.kernel + kx;
                                    grads.weights[li][wi] += go * in[ii];
                                    gin[ii] += go * params_.weights[li][wi];
                                }
                    }
            grad = std::move(gin);
        } else {  // relu
            Tensor gin = grad;
            for (long i = 0; i < gin.size(); ++i)
                if (in[i] <= 0.0) gin[i] = 0.0;
            grad = std::move(gin);
        }
    }
    return grads;
}

ParameterSet Network::zero_like() const {
    ParameterSet z;
    for (size_t l = 0; l < params_.weights.size(); ++l) {
        z.weights.emplace_back(params_.weights[l].shape);
        z.biases.emplace_back(params_.biases[l].shape);
    }
    return z;
}

void Network::sgd_step(const ParameterSet& grads, double lr, double momentum) {
    if (momentum > 0.0) {
        if (!has_velocity_) {
            velocity_ = zero_like();
            has_velocity_ = true;
        }
        for (size_t l = 0; l < params_.weights.size(); ++l) {
            for (long i = 0; i < params_.weights[l].size(); ++i) {
                velocity_.weights[l][i] = momentum * velocity_.weights[l][i] - lr * grads.weights[l][i];
                params_.weights[l][i] += velocity_.weights[l][i];
            }
            for (long i = 0; i < params_.biases[l].size(); ++i) {
                velocity_.biases[l][i] = momentum * velocity_.biases[l][i] - lr * grads.biases[l][i];
                params_.biases[l][i] += velocity_.biases[l][i];
            }
        }
    } else {
        params_.add_scaled(grads, -lr);
    }
}

int Network::output_size() const {
    for (size_t li = spec_.layers.size(); li-- > 0;) {
        const auto& l = spec_.layers[li];
        if (l.kind == LayerKind::Dense) return l.out;
        if (l.kind == LayerKind::Conv) return l.out_c * l.out_h() * l.out_w();
    }
    throw std::logic_error("nn: no sized layer");
}

std::vector<int> Network::input_shape() const {
    const auto& l = spec_.layers.front();
    if (l.kind == LayerKind::Dense) return {l.in};
    if (l.kind == LayerKind::Conv) return {l.in_c, l.in_h, l.in_w};
    throw std::logic_error("nn: leading activation layer");
}

Tensor softmax(const Tensor& logits) {
    Tensor p = logits;
    double mx = p[0];
    for (double v : p.data) mx = std::max(mx, v);
    double sum = 0.0;
    for (auto& v : p.data) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (auto& v : p.data) v /= sum;
    return p;
}

std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int target) {
    if (target < 0 || target >= logits.size()) throw std::invalid_argument("nn: target out of range");
    Tensor p = softmax(logits);
    double loss = -std::log(std::max(p[target], 1e-300));
    Tensor grad = p;
    grad[target] -= 1.0;
    return {loss, grad};
}

// --- checkpoint io (text, hexfloat payloads for bit-exact round trips) ---

static const char* kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Dense: return "dense";
        case LayerKind::Conv: return "conv";
        default: return "relu";
    }
}

void Network::save(std::ostream& os) const {
    os << "reline-checkpoint v1\n";
    os << "seed " << spec_.init_seed << "\n";
    os << "layers " << spec_.layers.size() << "\n";
    for (const auto& l : spec_.layers) {
        os << kind_name(l.kind);
        if (l.kind == LayerKind::Dense) os << " " << l.in << " " << l.out;
        if (l.kind == LayerKind::Conv)
            os << " " << l.in_c << " " << l.out_c << " " << l.kernel << " " << l.stride << " " << l.in_h << " " << l.in_w;
        os << "\n";
    }
    os << std::hexfloat;
    for (size_t li = 0; li < params_.weights.size(); ++li) {
        os << "param " << params_.weights[li].size() << " " << params_.biases[li].size() << "\n";
        for (double v : params_.weights[li].data) os << v << "\n";
        for (double v : params_.biases[li].data) os << v << "\n";
    }
    os << std::defaultfloat;
}

Network Network::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "reline-checkpoint v1")
        throw std::runtime_error("checkpoint: bad header");
    std::string word;
    NetworkSpec spec;
    size_t n_layers = 0;
    is >> word >> spec.init_seed;
    is >> word >> n_layers;
    for (size_t i = 0; i < n_layers; ++i) {
        is >> word;
        LayerSpec l;
        if (word == "dense") {
            l.kind = LayerKind::Dense;
            is >> l.in >> l.out;
        } else if (word == "conv") {
            l.kind = LayerKind::Conv;
            is >> l.in_c >> l.out_c >> l.kernel >> l.stride >> l.in_h >> l.in_w;
        } else if (word == "relu") {
            l.kind = LayerKind::Relu;
        } else {
            throw std::runtime_error("checkpoint: unknown layer kind " + word);
        }
        spec.layers.push_back(l);
    }
    Network net(spec);
    for (size_t li = 0; li < net.params_.weights.size(); ++li) {
        long nw = 0, nb = 0;
        is >> word >> nw >> nb;
        if (word != "param" || nw != net.params_.weights[li].size() || nb != net.params_.biases[li].size())
            throw std::runtime_error("checkpoint: parameter block mismatch");
        for (long i = 0; i < nw; ++i) {
            is >> word;
            net.params_.weights[li][i] = std::strtod(word.c_str(), nullptr);
        }
        for (long i = 0; i < nb; ++i) {
            is >> word;
            net.params_.biases[li][i] = std::strtod(word.c_str(), nullptr);
        }
    }
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return net;
}

void Network::save_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
    save(os);
}

Network Network::load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    return load(is);
}

}  // namespace reline::nn
