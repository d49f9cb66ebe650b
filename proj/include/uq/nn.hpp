#pragma once

// Minimal dense feed-forward network with exact reverse-mode gradients,
// inverted dropout, and Nesterov-momentum SGD. Everything is 64-bit.
//
// Conventions:
//  - Weight matrices are row-major (out_dim x in_dim); biases per layer.
//  - Dropout applies to hidden post-activations only (never input or output),
//    scaled by 1/(1-p) at train time so eval mode needs no rescaling.
//  - sgd_step applies v <- m*v - lr*grad; theta <- theta + v. For the Nesterov
//    lookahead form, evaluate the gradient at theta + m*v (see lookahead()).
//
// An Mlp is single-writer during training; concurrent read-only inference on
// a stable instance is safe.

#include <cstdint>
#include <vector>

#include "uq/rng.hpp"

namespace uq {

enum class Act { Tanh, Relu, Linear, Sigmoid, Softplus };

struct LayerSpec {
    std::size_t in_dim;
    std::size_t out_dim;
    Act activation;
};

struct Mlp {
    std::vector<LayerSpec> layers;
    std::vector<std::vector<double>> weights;  // [layer][row*in_dim + col]
    std::vector<std::vector<double>> biases;   // [layer][row]
    std::uint64_t rng_seed = 0;

    std::size_t input_dim() const { return layers.front().in_dim; }
    std::size_t output_dim() const { return layers.back().out_dim; }
    std::size_t param_count() const;
};

// Gradients (or velocities) in the same shape as an Mlp's parameters.
struct ParamGrads {
    std::vector<std::vector<double>> d_weights;
    std::vector<std::vector<double>> d_biases;

    void scale(double factor);
    void add(const ParamGrads& other);
    void zero();
};

struct OptState {
    ParamGrads velocity;
    double learning_rate;
    double momentum;      // in [0,1)
    double dropout_rate;  // in [0,1), hidden layers only
};

enum class Mode { Train, Eval };

struct ForwardCache {
    std::vector<double> input;
    std::vector<std::vector<double>> pre;   // pre-activation per layer
    std::vector<std::vector<double>> post;  // after activation and dropout mask
    std::vector<std::vector<double>> mask;  // scaled keep mask; empty when unused
    // Final pre-activation; for a quantifier net this is xi.
    double last_pre() const { return pre.back()[0]; }
};

// Weights uniform in [-s, s] with s = sqrt(6/(in+out)); biases zero.
// Deterministic in (specs, seed).
Mlp mlp_new(const std::vector<LayerSpec>& specs, std::uint64_t seed);

ParamGrads zero_grads(const Mlp& net);
OptState make_opt_state(const Mlp& net, double learning_rate, double momentum,
                        double dropout_rate);

// rng is only consumed in train mode with dropout_rate > 0.
std::vector<double> forward(const Mlp& net, const std::vector<double>& x, Mode mode,
                            double dropout_rate, Rng* rng, ForwardCache* cache);

// Eval-mode convenience (no dropout, no cache retained).
std::vector<double> forward(const Mlp& net, const std::vector<double>& x);

// Exact gradient of sum_k output[k]*out_grad[k] w.r.t. every parameter,
// honoring the dropout masks recorded in the cache.
ParamGrads backward(const Mlp& net, const ForwardCache& cache,
                    const std::vector<double>& out_grad);

// As backward, but the seed gradient attaches to the final pre-activation
// instead of the output (the loss acts on xi directly for quantifier nets).
ParamGrads backward_from_preact(const Mlp& net, const ForwardCache& cache,
                                const std::vector<double>& preact_grad);

// v <- momentum*v - lr*grads; theta <- theta + v. Plain SGD when momentum=0.
void sgd_step(Mlp& net, const ParamGrads& grads, OptState& opt);

// theta + momentum*velocity, the point where Nesterov gradients are taken.
Mlp lookahead(const Mlp& net, const OptState& opt);

}  // namespace uq
