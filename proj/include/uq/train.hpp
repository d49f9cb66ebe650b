#pragma once

// Joint training of a (regressor, quantifier) pair, the standard-regressor
// baseline, and post-hoc quantifier training against a frozen regressor.
//
// Per minibatch, both networks are evaluated at their Nesterov lookahead
// points; the per-sample joint loss
//
//   L_r(y, y_r) * f(z) + lambda * g(z)
//
// sends d(L_r)/d(y_r) * f(z) into the regressor and the xi-space derivative
// into the quantifier, both nets then take one momentum step. Updates are
// simultaneous, data is reshuffled every epoch, and the final short batch is
// used as-is. There is no gradient clipping and no early stopping; a
// non-finite epoch loss aborts with DivergenceError.
//
// Training runs in normalized target space. Reported expected losses are
// converted back to data units: expected MSE scales by (target std)^2,
// expected MAE by (target std).

#include <cstdint>
#include <string>
#include <vector>

#include "uq/data.hpp"
#include "uq/losses.hpp"
#include "uq/nn.hpp"

namespace uq {

struct TrainConfig {
    JointLossSpec loss_spec;
    std::size_t epochs = 100;
    std::size_t minibatch = 5;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double dropout = 0.0;
    std::uint64_t seed = 0;
    std::vector<LayerSpec> regressor_arch;
    std::vector<LayerSpec> quantifier_arch;
    std::string label;  // free-form tag carried into reports
};

struct TrainedPair {
    Mlp regressor;
    Mlp quantifier;
    JointLossSpec loss_spec;
    Normalizer normalizer;
    std::vector<double> history;  // mean joint training loss per epoch
};

struct TrainedRegressor {
    Mlp regressor;
    RegLoss kind;
    Normalizer normalizer;
    std::vector<double> history;  // mean regressor training loss per epoch
};

struct Prediction {
    double y_r;            // denormalized prediction
    double z;              // quantifier output (certainty, larger = surer)
    double expected_loss;  // in denormalized target units
};

// data must already be normalized; norm records how, so predictions can be
// mapped back (pass Normalizer::identity for pre-scaled data).
TrainedPair train_pair(const Dataset& data, const TrainConfig& cfg, const Normalizer& norm);

TrainedRegressor train_standard(const Dataset& data, const TrainConfig& cfg,
                                const Normalizer& norm);

// Trains only the quantifier; the regressor is copied in untouched and its
// predictions (eval mode, frozen weights) define the per-sample losses.
TrainedPair train_quantifier_posthoc(const TrainedRegressor& frozen, const Dataset& data,
                                     const TrainConfig& cfg);

// x is in raw data units; applies the pair's normalizer, runs both nets in
// eval mode, and denormalizes.
Prediction predict(const TrainedPair& pair, const std::vector<double>& x);

double predict_standard(const TrainedRegressor& model, const std::vector<double>& x);

// The maximum-likelihood baseline is the softplus head at lambda = 1:
// MSE then trains a Gaussian (mean, precision) model, MAE a Laplace one.
// Architectures, epochs and rates stay caller-provided.
TrainConfig ml_preset(RegLoss kind);

// Hidden specs + output layer appended: linear output for the regressor,
// the head activation for the quantifier.
std::vector<LayerSpec> regressor_arch(std::size_t input_dim,
                                      const std::vector<std::pair<std::size_t, Act>>& hidden);
std::vector<LayerSpec> quantifier_arch(std::size_t input_dim,
                                       const std::vector<std::pair<std::size_t, Act>>& hidden,
                                       Head variant);

void validate(const TrainConfig& cfg, std::size_t input_dim);

}  // namespace uq
