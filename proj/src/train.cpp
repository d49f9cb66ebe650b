#include "uq/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uq/errors.hpp"

namespace uq {

namespace {

Act head_activation(Head variant) {
    return variant == Head::Sigmoid ? Act::Sigmoid : Act::Softplus;
}

// Expected loss from the quantifier's final pre-activation. Equivalent to
// expected_loss(variant, Z(xi), lambda) but stays finite out to |xi| ~ 700,
// where z itself would round to the boundary of its interval.
double expected_loss_from_xi(Head variant, double xi, double lambda) {
    if (variant == Head::Sigmoid) return lambda * std::exp(-xi);  // 1/z - 1 = e^-xi
    return lambda / softplus(xi);
}

void check_data(const Dataset& data, const char* where) {
    if (data.size() == 0) throw ConfigError(std::string(where) + ": empty dataset");
}

double scale_expected_loss(RegLoss kind, double value, double target_std) {
    return kind == RegLoss::MSE ? value * target_std * target_std : value * target_std;
}

}  // namespace

std::vector<LayerSpec> regressor_arch(std::size_t input_dim,
                                      const std::vector<std::pair<std::size_t, Act>>& hidden) {
    std::vector<LayerSpec> specs;
    std::size_t in = input_dim;
    for (const auto& [units, act] : hidden) {
        specs.push_back({in, units, act});
        in = units;
    }
    specs.push_back({in, 1, Act::Linear});
    return specs;
}

std::vector<LayerSpec> quantifier_arch(std::size_t input_dim,
                                       const std::vector<std::pair<std::size_t, Act>>& hidden,
                                       Head variant) {
    std::vector<LayerSpec> specs;
    std::size_t in = input_dim;
    for (const auto& [units, act] : hidden) {
        specs.push_back({in, units, act});
        in = units;
    }
    specs.push_back({in, 1, head_activation(variant)});
    return specs;
}

void validate(const TrainConfig& cfg, std::size_t input_dim) {
    if (!(cfg.loss_spec.lambda > 0.0)) throw ConfigError("train: lambda must be > 0");
    if (cfg.minibatch == 0) throw ConfigError("train: minibatch must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
        throw ConfigError("train: momentum must be in [0,1)");
    }
    if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw ConfigError("train: dropout must be in [0,1)");
    if (cfg.regressor_arch.empty() || cfg.quantifier_arch.empty()) {
        throw ConfigError("train: both architectures must be non-empty");
    }
    if (cfg.regressor_arch.front().in_dim != input_dim ||
        cfg.quantifier_arch.front().in_dim != input_dim) {
        throw ConfigError("train: architecture input dim does not match data");
    }
    if (cfg.regressor_arch.back().out_dim != 1 ||
        cfg.regressor_arch.back().activation != Act::Linear) {
        throw ConfigError("train: regressor output must be a single linear unit");
    }
    if (cfg.quantifier_arch.back().out_dim != 1 ||
        cfg.quantifier_arch.back().activation != head_activation(cfg.loss_spec.variant)) {
        throw ConfigError("train: quantifier output activation must match the head variant");
    }
}

TrainedPair train_pair(const Dataset& data, const TrainConfig& cfg, const Normalizer& norm) {
    check_data(data, "train_pair");
    validate(cfg, data.dim());
    Mlp reg = mlp_new(cfg.regressor_arch, derive_seed(cfg.seed, 1));
    Mlp quant = mlp_new(cfg.quantifier_arch, derive_seed(cfg.seed, 2));
    OptState opt_r = make_opt_state(reg, cfg.learning_rate, cfg.momentum, cfg.dropout);
    OptState opt_q = make_opt_state(quant, cfg.learning_rate, cfg.momentum, cfg.dropout);
    Rng rng(derive_seed(cfg.seed, 3));

    const std::size_t n = data.size();
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);

    std::vector<double> history;
    history.reserve(cfg.epochs);
    ParamGrads batch_gr = zero_grads(reg);
    ParamGrads batch_gq = zero_grads(quant);
    ForwardCache cache_r, cache_q;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(indices);
        double epoch_loss = 0.0;
        // non-finite values inside the epoch are divergence, not configuration
        try {
            for (std::size_t start = 0; start < n; start += cfg.minibatch) {
                const std::size_t stop = std::min(start + cfg.minibatch, n);
                const Mlp reg_ahead = lookahead(reg, opt_r);
                const Mlp quant_ahead = lookahead(quant, opt_q);
                batch_gr.zero();
                batch_gq.zero();
                for (std::size_t k = start; k < stop; ++k) {
                    const std::size_t i = indices[k];
                    const std::vector<double> y_r = forward(reg_ahead, data.inputs[i], Mode::Train,
                                                            cfg.dropout, &rng, &cache_r);
                    forward(quant_ahead, data.inputs[i], Mode::Train, cfg.dropout, &rng, &cache_q);
                    const double xi = cache_q.last_pre();
                    const RegLossEval reg_eval =
                        regressor_loss(cfg.loss_spec.regressor_loss, data.targets[i], y_r[0]);
                    const PerSampleLoss sample =
                        joint_loss_sample(cfg.loss_spec, reg_eval.value, xi);
                    epoch_loss += sample.value;
                    batch_gr.add(backward(reg_ahead, cache_r, {reg_eval.d_dyr * sample.d_dL}));
                    batch_gq.add(backward_from_preact(quant_ahead, cache_q, {sample.d_dxi}));
                }
                const double inv_batch = 1.0 / static_cast<double>(stop - start);
                batch_gr.scale(inv_batch);
                batch_gq.scale(inv_batch);
                sgd_step(reg, batch_gr, opt_r);
                sgd_step(quant, batch_gq, opt_q);
            }
        } catch (const ConfigError&) {
            throw DivergenceError(epoch);
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) throw DivergenceError(epoch);
        history.push_back(epoch_loss);
    }
    return TrainedPair{std::move(reg), std::move(quant), cfg.loss_spec, norm,
                       std::move(history)};
}

TrainedRegressor train_standard(const Dataset& data, const TrainConfig& cfg,
                                const Normalizer& norm) {
    check_data(data, "train_standard");
    if (cfg.regressor_arch.empty() || cfg.regressor_arch.front().in_dim != data.dim()) {
        throw ConfigError("train_standard: architecture input dim does not match data");
    }
    if (cfg.regressor_arch.back().out_dim != 1 ||
        cfg.regressor_arch.back().activation != Act::Linear) {
        throw ConfigError("train_standard: regressor output must be a single linear unit");
    }
    Mlp reg = mlp_new(cfg.regressor_arch, derive_seed(cfg.seed, 1));
    OptState opt_r = make_opt_state(reg, cfg.learning_rate, cfg.momentum, cfg.dropout);
    Rng rng(derive_seed(cfg.seed, 3));

    const std::size_t n = data.size();
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);

    std::vector<double> history;
    history.reserve(cfg.epochs);
    ParamGrads batch_gr = zero_grads(reg);
    ForwardCache cache_r;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(indices);
        double epoch_loss = 0.0;
        // non-finite values inside the epoch are divergence, not configuration
        try {
            for (std::size_t start = 0; start < n; start += cfg.minibatch) {
                const std::size_t stop = std::min(start + cfg.minibatch, n);
                const Mlp reg_ahead = lookahead(reg, opt_r);
                batch_gr.zero();
                for (std::size_t k = start; k < stop; ++k) {
                    const std::size_t i = indices[k];
                    const std::vector<double> y_r = forward(reg_ahead, data.inputs[i], Mode::Train,
                                                            cfg.dropout, &rng, &cache_r);
                    const RegLossEval reg_eval =
                        regressor_loss(cfg.loss_spec.regressor_loss, data.targets[i], y_r[0]);
                    epoch_loss += reg_eval.value;
                    batch_gr.add(backward(reg_ahead, cache_r, {reg_eval.d_dyr}));
                }
                batch_gr.scale(1.0 / static_cast<double>(stop - start));
                sgd_step(reg, batch_gr, opt_r);
            }
        } catch (const ConfigError&) {
            throw DivergenceError(epoch);
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) throw DivergenceError(epoch);
        history.push_back(epoch_loss);
    }
    return TrainedRegressor{std::move(reg), cfg.loss_spec.regressor_loss, norm,
                            std::move(history)};
}

TrainedPair train_quantifier_posthoc(const TrainedRegressor& frozen, const Dataset& data,
                                     const TrainConfig& cfg) {
    check_data(data, "train_quantifier_posthoc");
    validate(cfg, data.dim());
    if (cfg.loss_spec.regressor_loss != frozen.kind) {
        throw ConfigError("train_quantifier_posthoc: loss kind differs from the frozen model");
    }
    // Frozen predictions fix the per-sample losses once.
    const std::size_t n = data.size();
    std::vector<double> losses(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y_r = forward(frozen.regressor, data.inputs[i])[0];
        losses[i] = regressor_loss(frozen.kind, data.targets[i], y_r).value;
    }

    Mlp quant = mlp_new(cfg.quantifier_arch, derive_seed(cfg.seed, 2));
    OptState opt_q = make_opt_state(quant, cfg.learning_rate, cfg.momentum, cfg.dropout);
    Rng rng(derive_seed(cfg.seed, 3));

    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    std::vector<double> history;
    history.reserve(cfg.epochs);
    ParamGrads batch_gq = zero_grads(quant);
    ForwardCache cache_q;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(indices);
        double epoch_loss = 0.0;
        // non-finite values inside the epoch are divergence, not configuration
        try {
            for (std::size_t start = 0; start < n; start += cfg.minibatch) {
                const std::size_t stop = std::min(start + cfg.minibatch, n);
                const Mlp quant_ahead = lookahead(quant, opt_q);
                batch_gq.zero();
                for (std::size_t k = start; k < stop; ++k) {
                    const std::size_t i = indices[k];
                    forward(quant_ahead, data.inputs[i], Mode::Train, cfg.dropout, &rng, &cache_q);
                    const PerSampleLoss sample =
                        joint_loss_sample(cfg.loss_spec, losses[i], cache_q.last_pre());
                    epoch_loss += sample.value;
                    batch_gq.add(backward_from_preact(quant_ahead, cache_q, {sample.d_dxi}));
                }
                batch_gq.scale(1.0 / static_cast<double>(stop - start));
                sgd_step(quant, batch_gq, opt_q);
            }
        } catch (const ConfigError&) {
            throw DivergenceError(epoch);
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) throw DivergenceError(epoch);
        history.push_back(epoch_loss);
    }
    return TrainedPair{frozen.regressor, std::move(quant), cfg.loss_spec, frozen.normalizer,
                       std::move(history)};
}

Prediction predict(const TrainedPair& pair, const std::vector<double>& x) {
    const std::vector<double> x_norm = pair.normalizer.apply_input(x);
    const double y_norm = forward(pair.regressor, x_norm)[0];
    ForwardCache cache;
    const double z = forward(pair.quantifier, x_norm, Mode::Eval, 0.0, nullptr, &cache)[0];
    const double el_norm =
        expected_loss_from_xi(pair.loss_spec.variant, cache.last_pre(), pair.loss_spec.lambda);
    return Prediction{pair.normalizer.invert_target(y_norm), z,
                      scale_expected_loss(pair.loss_spec.regressor_loss, el_norm,
                                          pair.normalizer.target_std)};
}

double predict_standard(const TrainedRegressor& model, const std::vector<double>& x) {
    const std::vector<double> x_norm = model.normalizer.apply_input(x);
    return model.normalizer.invert_target(forward(model.regressor, x_norm)[0]);
}

TrainConfig ml_preset(RegLoss kind) {
    TrainConfig cfg;
    cfg.loss_spec = JointLossSpec{Head::Softplus, 1.0, kind};
    cfg.label = "ML";
    return cfg;
}

}  // namespace uq
