#pragma once

// K independently initialized (regressor, quantifier) pairs trained on the
// same data, aggregated as an equal-weight mixture:
//
//   mean-variance (MSE members): mu = (1/K) sum mu_j,
//     V = (1/K) sum (V_j + (mu_j - mu)^2)
//   mean-EAE (MAE members, tau_j = 1/EAE_j): mu as above,
//     EAE = (1/K) sum (|mu - mu_j| + (1/tau_j) e^(-|mu - mu_j| tau_j))
//
// The V formula is the exact mixture variance, so ensemble V equals the mean
// member variance plus the population variance of the member means.

#include <cstdint>
#include <vector>

#include "uq/train.hpp"

namespace uq {

enum class EnsembleKind { MeanVariance, MeanEAE };

struct EnsembleModel {
    std::vector<TrainedPair> members;
    EnsembleKind kind;
};

struct EnsemblePrediction {
    double mu;
    double spread;  // V or EAE depending on kind
};

EnsemblePrediction aggregate_mean_variance(const std::vector<double>& mus,
                                           const std::vector<double>& vars);

EnsemblePrediction aggregate_mean_eae(const std::vector<double>& mus,
                                      const std::vector<double>& taus);

// Members use seeds base_seed + j for j in [0, K); identical data, no
// bagging. Aggregation kind follows the loss: MSE -> MeanVariance,
// MAE -> MeanEAE. jobs > 1 trains members on that many threads.
EnsembleModel ensemble_train(const Dataset& data, const TrainConfig& cfg,
                             const Normalizer& norm, std::size_t k, std::uint64_t base_seed,
                             std::size_t jobs = 1);

EnsemblePrediction ensemble_predict(const EnsembleModel& model, const std::vector<double>& x);

}  // namespace uq
