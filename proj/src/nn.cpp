#include "uq/nn.hpp"

#include <cmath>
#include <string>

#include "uq/errors.hpp"
#include "uq/kernels.hpp"
#include "uq/losses.hpp"

namespace uq {

namespace {

double activate(Act act, double v) {
    switch (act) {
        case Act::Tanh: return std::tanh(v);
        case Act::Relu: return v > 0.0 ? v : 0.0;
        case Act::Linear: return v;
        case Act::Sigmoid: return sigmoid(v);
        case Act::Softplus: return softplus(v);
    }
    throw ConfigError("unknown activation");
}

// Derivative from the pre-activation and the activation output (before any
// dropout mask).
double activate_deriv(Act act, double pre, double post) {
    switch (act) {
        case Act::Tanh: return 1.0 - post * post;
        case Act::Relu: return pre > 0.0 ? 1.0 : 0.0;
        case Act::Linear: return 1.0;
        case Act::Sigmoid: return post * (1.0 - post);
        case Act::Softplus: return sigmoid(pre);
    }
    throw ConfigError("unknown activation");
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw ConfigError(std::string(what) + ": non-finite value");
    }
}

// Shared backward path once the gradient at the last layer's pre-activation
// is known.
ParamGrads backward_impl(const Mlp& net, const ForwardCache& cache,
                         std::vector<double> delta) {
    const std::size_t n_layers = net.layers.size();
    if (cache.pre.size() != n_layers || cache.post.size() != n_layers ||
        cache.input.size() != net.input_dim()) {
        throw ConfigError("backward: cache does not match network");
    }
    for (std::size_t li = 0; li < n_layers; ++li) {
        if (cache.pre[li].size() != net.layers[li].out_dim ||
            cache.post[li].size() != net.layers[li].out_dim) {
            throw ConfigError("backward: cache does not match network");
        }
    }
    ParamGrads grads = zero_grads(net);
    for (std::size_t li = n_layers; li-- > 0;) {
        const LayerSpec& spec = net.layers[li];
        const std::vector<double>& below = li == 0 ? cache.input : cache.post[li - 1];
        // dW += delta * below^T; db += delta
        kernels::ger_acc(grads.d_weights[li].data(), delta.data(), below.data(),
                         spec.out_dim, spec.in_dim);
        kernels::axpy(1.0, delta.data(), grads.d_biases[li].data(), spec.out_dim);
        if (li == 0) break;
        // Propagate to the layer below: delta_below = W^T delta, then through
        // that layer's mask and activation derivative.
        std::vector<double> below_delta(spec.in_dim);
        kernels::matvec_t(net.weights[li].data(), delta.data(), below_delta.data(),
                          spec.out_dim, spec.in_dim);
        const LayerSpec& below_spec = net.layers[li - 1];
        const std::vector<double>& pre = cache.pre[li - 1];
        const bool masked = !cache.mask[li - 1].empty();
        for (std::size_t k = 0; k < below_spec.out_dim; ++k) {
            double scale = masked ? cache.mask[li - 1][k] : 1.0;
            // post holds the masked value; undo the mask for the derivative
            const double act_out = masked && cache.mask[li - 1][k] != 0.0
                                       ? cache.post[li - 1][k] / cache.mask[li - 1][k]
                                       : cache.post[li - 1][k];
            below_delta[k] *= scale * activate_deriv(below_spec.activation, pre[k], act_out);
        }
        delta = std::move(below_delta);
    }
    return grads;
}

}  // namespace

std::size_t Mlp::param_count() const {
    std::size_t count = 0;
    for (const LayerSpec& spec : layers) count += spec.out_dim * (spec.in_dim + 1);
    return count;
}

void ParamGrads::scale(double factor) {
    for (auto& w : d_weights)
        for (auto& v : w) v *= factor;
    for (auto& b : d_biases)
        for (auto& v : b) v *= factor;
}

void ParamGrads::add(const ParamGrads& other) {
    for (std::size_t li = 0; li < d_weights.size(); ++li) {
        kernels::axpy(1.0, other.d_weights[li].data(), d_weights[li].data(),
                      d_weights[li].size());
        kernels::axpy(1.0, other.d_biases[li].data(), d_biases[li].data(),
                      d_biases[li].size());
    }
}

void ParamGrads::zero() {
    for (auto& w : d_weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : d_biases) std::fill(b.begin(), b.end(), 0.0);
}

Mlp mlp_new(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    if (specs.empty()) throw ConfigError("mlp_new: at least one layer required");
    for (std::size_t i = 0; i + 1 < specs.size(); ++i) {
        if (specs[i].out_dim != specs[i + 1].in_dim) {
            throw ConfigError("mlp_new: layer " + std::to_string(i) + " out_dim " +
                              std::to_string(specs[i].out_dim) + " does not chain into layer " +
                              std::to_string(i + 1) + " in_dim " +
                              std::to_string(specs[i + 1].in_dim));
        }
    }
    for (const LayerSpec& spec : specs) {
        if (spec.in_dim == 0 || spec.out_dim == 0) {
            throw ConfigError("mlp_new: zero layer dimension");
        }
    }
    Mlp net;
    net.layers = specs;
    net.rng_seed = seed;
    Rng rng(derive_seed(seed, 0x6e6574));
    for (const LayerSpec& spec : specs) {
        const double s = std::sqrt(6.0 / static_cast<double>(spec.in_dim + spec.out_dim));
        std::vector<double> w(spec.out_dim * spec.in_dim);
        for (double& v : w) v = rng.uniform(-s, s);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(spec.out_dim, 0.0);
    }
    return net;
}

ParamGrads zero_grads(const Mlp& net) {
    ParamGrads grads;
    for (const LayerSpec& spec : net.layers) {
        grads.d_weights.emplace_back(spec.out_dim * spec.in_dim, 0.0);
        grads.d_biases.emplace_back(spec.out_dim, 0.0);
    }
    return grads;
}

OptState make_opt_state(const Mlp& net, double learning_rate, double momentum,
                        double dropout_rate) {
    if (!(learning_rate > 0.0)) throw ConfigError("make_opt_state: learning_rate must be > 0");
    if (momentum < 0.0 || momentum >= 1.0) {
        throw ConfigError("make_opt_state: momentum must be in [0,1)");
    }
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw ConfigError("make_opt_state: dropout_rate must be in [0,1)");
    }
    return OptState{zero_grads(net), learning_rate, momentum, dropout_rate};
}

std::vector<double> forward(const Mlp& net, const std::vector<double>& x, Mode mode,
                            double dropout_rate, Rng* rng, ForwardCache* cache) {
    if (x.size() != net.input_dim()) throw ConfigError("forward: input dimension mismatch");
    check_finite(x, "forward input");
    const bool dropout_active = mode == Mode::Train && dropout_rate > 0.0;
    if (dropout_active && rng == nullptr) {
        throw ConfigError("forward: dropout in train mode needs an rng");
    }
    const std::size_t n_layers = net.layers.size();
    if (cache != nullptr) {
        cache->input = x;
        cache->pre.assign(n_layers, {});
        cache->post.assign(n_layers, {});
        cache->mask.assign(n_layers, {});
    }
    std::vector<double> current = x;
    std::vector<double> pre;
    for (std::size_t li = 0; li < n_layers; ++li) {
        const LayerSpec& spec = net.layers[li];
        pre.assign(spec.out_dim, 0.0);
        kernels::matvec(net.weights[li].data(), current.data(), net.biases[li].data(),
                        pre.data(), spec.out_dim, spec.in_dim);
        std::vector<double> out(spec.out_dim);
        for (std::size_t k = 0; k < spec.out_dim; ++k) out[k] = activate(spec.activation, pre[k]);
        const bool hidden = li + 1 < n_layers;
        if (dropout_active && hidden) {
            const double keep = 1.0 - dropout_rate;
            std::vector<double> mask(spec.out_dim);
            for (std::size_t k = 0; k < spec.out_dim; ++k) {
                mask[k] = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
                out[k] *= mask[k];
            }
            if (cache != nullptr) cache->mask[li] = std::move(mask);
        }
        if (cache != nullptr) {
            cache->pre[li] = pre;
            cache->post[li] = out;
        }
        current = std::move(out);
    }
    return current;
}

std::vector<double> forward(const Mlp& net, const std::vector<double>& x) {
    return forward(net, x, Mode::Eval, 0.0, nullptr, nullptr);
}

ParamGrads backward(const Mlp& net, const ForwardCache& cache,
                    const std::vector<double>& out_grad) {
    const LayerSpec& last = net.layers.back();
    if (out_grad.size() != last.out_dim) throw ConfigError("backward: out_grad size mismatch");
    if (cache.pre.size() != net.layers.size() || cache.pre.back().size() != last.out_dim) {
        throw ConfigError("backward: cache does not match network");
    }
    std::vector<double> delta(last.out_dim);
    // The output layer never carries a dropout mask.
    for (std::size_t k = 0; k < last.out_dim; ++k) {
        delta[k] = out_grad[k] *
                   activate_deriv(last.activation, cache.pre.back()[k], cache.post.back()[k]);
    }
    return backward_impl(net, cache, std::move(delta));
}

ParamGrads backward_from_preact(const Mlp& net, const ForwardCache& cache,
                                const std::vector<double>& preact_grad) {
    const LayerSpec& last = net.layers.back();
    if (preact_grad.size() != last.out_dim) {
        throw ConfigError("backward_from_preact: gradient size mismatch");
    }
    if (cache.pre.size() != net.layers.size() || cache.pre.back().size() != last.out_dim) {
        throw ConfigError("backward_from_preact: cache does not match network");
    }
    return backward_impl(net, cache, preact_grad);
}

void sgd_step(Mlp& net, const ParamGrads& grads, OptState& opt) {
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        for (double v : grads.d_weights[li]) {
            if (!std::isfinite(v)) throw ConfigError("sgd_step: non-finite gradient");
        }
        for (double v : grads.d_biases[li]) {
            if (!std::isfinite(v)) throw ConfigError("sgd_step: non-finite gradient");
        }
    }
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        auto& vw = opt.velocity.d_weights[li];
        auto& vb = opt.velocity.d_biases[li];
        kernels::scale_axpy(vw.data(), opt.momentum, -opt.learning_rate,
                            grads.d_weights[li].data(), vw.size());
        kernels::scale_axpy(vb.data(), opt.momentum, -opt.learning_rate,
                            grads.d_biases[li].data(), vb.size());
        kernels::axpy(1.0, vw.data(), net.weights[li].data(), vw.size());
        kernels::axpy(1.0, vb.data(), net.biases[li].data(), vb.size());
    }
}

Mlp lookahead(const Mlp& net, const OptState& opt) {
    Mlp ahead = net;
    if (opt.momentum == 0.0) return ahead;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        kernels::axpy(opt.momentum, opt.velocity.d_weights[li].data(),
                      ahead.weights[li].data(), ahead.weights[li].size());
        kernels::axpy(opt.momentum, opt.velocity.d_biases[li].data(),
                      ahead.biases[li].data(), ahead.biases[li].size());
    }
    return ahead;
}

}  // namespace uq
