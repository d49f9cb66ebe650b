#pragma once

// Synthetic generators, CSV ingestion, train-set normalization, and the
// random-split fold protocol. Scalar targets throughout.

#include <cstdint>
#include <string>
#include <vector>

namespace uq {

struct Dataset {
    std::vector<std::vector<double>> inputs;  // N x n
    std::vector<double> targets;              // N
    std::vector<std::string> feature_names;   // may be empty
    std::string target_name;

    std::size_t size() const { return inputs.size(); }
    std::size_t dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
};

// Per-feature and target affine transforms to zero mean, unit variance.
// Population (1/N) standard deviation; a constant column keeps std 1 so the
// transform stays invertible.
struct Normalizer {
    std::vector<double> input_mean;
    std::vector<double> input_std;
    double target_mean = 0.0;
    double target_std = 1.0;

    static Normalizer identity(std::size_t n_features);

    std::vector<double> apply_input(const std::vector<double>& x) const;
    Dataset apply(const Dataset& data) const;
    Dataset invert(const Dataset& data) const;
    double invert_target(double y_norm) const { return y_norm * target_std + target_mean; }
};

struct FoldPlan {
    struct Fold {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
    };
    std::vector<Fold> folds;
    double train_fraction = 0.95;
    std::uint64_t seed = 0;
};

// x uniform on [0,1]; y ~ Normal(3x + sin(2 pi x), (1 + sin(4 pi x))^2).
// The std factor touches 0 at x = 3/8 and x = 7/8.
Dataset gen_smooth(std::size_t n, std::uint64_t seed);

// Piecewise data with two contaminated strips. Clean points lie exactly on
// y = 3x + sin(2 pi x) with x drawn outside both strips; a point is noisy
// with probability noisy_fraction, picks either strip evenly, and draws
// y ~ Normal(-2, sigma^2) with sigma = 1 in the first strip and 5 in the
// second. Default strips: [0.2, 0.3] and [0.6, 0.7].
struct SharpSpec {
    double strip1_lo = 0.2, strip1_hi = 0.3, strip1_sigma = 1.0;
    double strip2_lo = 0.6, strip2_hi = 0.7, strip2_sigma = 5.0;
    double noise_mean = -2.0;
};
Dataset gen_sharp(std::size_t n, double noisy_fraction, std::uint64_t seed,
                  const SharpSpec& spec = SharpSpec{});

// Rectangular CSV with a header row; '.' decimal point, no quoting. The
// target column is selected by header name, or by 0-based index if the
// string parses as one. Errors carry row/column locations.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Writes header + rows; values in round-trip precision.
void save_csv(const std::string& path, const Dataset& data);

// Statistics from the train subset only.
Normalizer fit_normalizer(const Dataset& data, const std::vector<std::size_t>& train_indices);

// Each fold is an independent uniform split (not a partition across folds):
// round(train_fraction*N) train indices, the rest test, sorted ascending.
FoldPlan make_folds(std::size_t n, std::size_t fold_count, double train_fraction,
                    std::uint64_t seed);

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices);

}  // namespace uq
