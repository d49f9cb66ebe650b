#include "uq/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "uq/errors.hpp"

namespace uq {

namespace {

// Members are summed in sorted order so the aggregate is exactly invariant
// to member permutation, not merely up to rounding.
std::vector<std::pair<double, double>> sorted_pairs(const std::vector<double>& a,
                                                    const std::vector<double>& b) {
    std::vector<std::pair<double, double>> pairs(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) pairs[j] = {a[j], b[j]};
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace

EnsemblePrediction aggregate_mean_variance(const std::vector<double>& mus,
                                           const std::vector<double>& vars) {
    if (mus.empty() || mus.size() != vars.size()) {
        throw ConfigError("aggregate_mean_variance: need equal-length non-empty inputs");
    }
    for (double v : vars) {
        if (v < 0.0) throw ConfigError("aggregate_mean_variance: negative variance");
    }
    const auto pairs = sorted_pairs(mus, vars);
    const double k = static_cast<double>(pairs.size());
    double mu = 0.0;
    for (const auto& [m, v] : pairs) mu += m;
    mu /= k;
    double mean_var = 0.0;
    double mean_sq_dev = 0.0;
    for (const auto& [m, v] : pairs) {
        mean_var += v;
        const double d = m - mu;
        mean_sq_dev += d * d;
    }
    return {mu, mean_var / k + mean_sq_dev / k};
}

EnsemblePrediction aggregate_mean_eae(const std::vector<double>& mus,
                                      const std::vector<double>& taus) {
    if (mus.empty() || mus.size() != taus.size()) {
        throw ConfigError("aggregate_mean_eae: need equal-length non-empty inputs");
    }
    for (double t : taus) {
        if (!(t > 0.0)) throw ConfigError("aggregate_mean_eae: tau must be positive");
    }
    const auto pairs = sorted_pairs(mus, taus);
    const double k = static_cast<double>(pairs.size());
    double mu = 0.0;
    for (const auto& [m, t] : pairs) mu += m;
    mu /= k;
    double eae = 0.0;
    for (const auto& [m, t] : pairs) {
        const double d = std::abs(mu - m);
        eae += d + std::exp(-d * t) / t;
    }
    return {mu, eae / k};
}

EnsembleModel ensemble_train(const Dataset& data, const TrainConfig& cfg,
                             const Normalizer& norm, std::size_t k, std::uint64_t base_seed,
                             std::size_t jobs) {
    if (k == 0) throw ConfigError("ensemble_train: k must be >= 1");
    EnsembleModel model;
    model.kind = cfg.loss_spec.regressor_loss == RegLoss::MSE ? EnsembleKind::MeanVariance
                                                              : EnsembleKind::MeanEAE;
    model.members.resize(k);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= k) return;
            try {
                TrainConfig member_cfg = cfg;
                member_cfg.seed = base_seed + j;
                model.members[j] = train_pair(data, member_cfg, norm);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(jobs, k); ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return model;
}

EnsemblePrediction ensemble_predict(const EnsembleModel& model, const std::vector<double>& x) {
    if (model.members.empty()) throw ConfigError("ensemble_predict: empty ensemble");
    std::vector<double> mus;
    std::vector<double> spreads;
    mus.reserve(model.members.size());
    spreads.reserve(model.members.size());
    for (const TrainedPair& member : model.members) {
        const Prediction p = predict(member, x);
        mus.push_back(p.y_r);
        spreads.push_back(p.expected_loss);
    }
    if (model.kind == EnsembleKind::MeanVariance) {
        return aggregate_mean_variance(mus, spreads);
    }
    // Member spread is the expected absolute error; tau is its reciprocal.
    std::vector<double> taus(spreads.size());
    for (std::size_t j = 0; j < spreads.size(); ++j) taus[j] = 1.0 / spreads[j];
    return aggregate_mean_eae(mus, taus);
}

}  // namespace uq
