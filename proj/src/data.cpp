#include "uq/data.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uq/errors.hpp"
#include "uq/rng.hpp"

namespace uq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clean_curve(double x) { return 3.0 * x + std::sin(kTwoPi * x); }

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    // Trailing whitespace (e.g. a stray \r) is tolerated; anything else is not.
    while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == begin || end == nullptr || *end != '\0' || errno == ERANGE ||
        !std::isfinite(value)) {
        throw IoError("csv: non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                      ", column " + std::to_string(col));
    }
    return value;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Normalizer Normalizer::identity(std::size_t n_features) {
    Normalizer norm;
    norm.input_mean.assign(n_features, 0.0);
    norm.input_std.assign(n_features, 1.0);
    return norm;
}

std::vector<double> Normalizer::apply_input(const std::vector<double>& x) const {
    if (x.size() != input_mean.size()) throw ConfigError("normalizer: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - input_mean[j]) / input_std[j];
    return out;
}

Dataset Normalizer::apply(const Dataset& data) const {
    Dataset out = data;
    for (std::size_t i = 0; i < data.size(); ++i) {
        out.inputs[i] = apply_input(data.inputs[i]);
        out.targets[i] = (data.targets[i] - target_mean) / target_std;
    }
    return out;
}

Dataset Normalizer::invert(const Dataset& data) const {
    Dataset out = data;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < input_mean.size(); ++j) {
            out.inputs[i][j] = data.inputs[i][j] * input_std[j] + input_mean[j];
        }
        out.targets[i] = invert_target(data.targets[i]);
    }
    return out;
}

Dataset gen_smooth(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ConfigError("gen_smooth: n must be >= 1");
    Rng rng(derive_seed(seed, 0x736d6f));
    Dataset data;
    data.feature_names = {"x"};
    data.target_name = "y";
    data.inputs.reserve(n);
    data.targets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform01();
        const double sigma = 1.0 + std::sin(2.0 * kTwoPi * x);
        data.inputs.push_back({x});
        data.targets.push_back(rng.normal(clean_curve(x), sigma));
    }
    return data;
}

Dataset gen_sharp(std::size_t n, double noisy_fraction, std::uint64_t seed,
                  const SharpSpec& spec) {
    if (n == 0) throw ConfigError("gen_sharp: n must be >= 1");
    if (!(noisy_fraction > 0.0 && noisy_fraction < 1.0)) {
        throw ConfigError("gen_sharp: noisy_fraction must be in (0,1)");
    }
    Rng rng(derive_seed(seed, 0x736870));
    auto in_strips = [&spec](double x) {
        return (x >= spec.strip1_lo && x <= spec.strip1_hi) ||
               (x >= spec.strip2_lo && x <= spec.strip2_hi);
    };
    Dataset data;
    data.feature_names = {"x"};
    data.target_name = "y";
    data.inputs.reserve(n);
    data.targets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x, y;
        if (rng.bernoulli(noisy_fraction)) {
            const bool first = rng.bernoulli(0.5);
            x = first ? rng.uniform(spec.strip1_lo, spec.strip1_hi)
                      : rng.uniform(spec.strip2_lo, spec.strip2_hi);
            y = rng.normal(spec.noise_mean, first ? spec.strip1_sigma : spec.strip2_sigma);
        } else {
            do {
                x = rng.uniform01();
            } while (in_strips(x));
            y = clean_curve(x);
        }
        data.inputs.push_back({x});
        data.targets.push_back(y);
    }
    return data;
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream file(path);
    if (!file) throw IoError("csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(file, line)) throw IoError("csv: empty file '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    if (header.empty()) throw IoError("csv: empty header in '" + path + "'");

    std::size_t target_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == target_column) {
            target_idx = j;
            break;
        }
    }
    if (target_idx == header.size()) {
        char* end = nullptr;
        const long idx = std::strtol(target_column.c_str(), &end, 10);
        if (end != target_column.c_str() && *end == '\0' && idx >= 0 &&
            static_cast<std::size_t>(idx) < header.size()) {
            target_idx = static_cast<std::size_t>(idx);
        }
    }
    if (target_idx == header.size()) {
        throw IoError("csv: target column '" + target_column + "' not found in '" + path + "'");
    }

    Dataset data;
    data.target_name = header[target_idx];
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != target_idx) data.feature_names.push_back(header[j]);
    }
    std::size_t row = 1;
    while (std::getline(file, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw IoError("csv: row " + std::to_string(row) + " has " +
                          std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(header.size()));
        }
        std::vector<double> features;
        features.reserve(header.size() - 1);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const double value = parse_cell(cells[j], row, j);
            if (j == target_idx) {
                data.targets.push_back(value);
            } else {
                features.push_back(value);
            }
        }
        data.inputs.push_back(std::move(features));
    }
    if (data.inputs.empty()) throw IoError("csv: no data rows in '" + path + "'");
    return data;
}

void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream file(path);
    if (!file) throw IoError("csv: cannot write '" + path + "'");
    for (std::size_t j = 0; j < data.dim(); ++j) {
        const std::string name =
            j < data.feature_names.size() ? data.feature_names[j] : "x" + std::to_string(j);
        file << name << ',';
    }
    file << (data.target_name.empty() ? "y" : data.target_name) << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.inputs[i]) file << format_value(v) << ',';
        file << format_value(data.targets[i]) << '\n';
    }
    if (!file) throw IoError("csv: write failed for '" + path + "'");
}

Normalizer fit_normalizer(const Dataset& data, const std::vector<std::size_t>& train_indices) {
    if (train_indices.empty()) throw ConfigError("fit_normalizer: empty train subset");
    const std::size_t n = data.dim();
    const double count = static_cast<double>(train_indices.size());
    Normalizer norm;
    norm.input_mean.assign(n, 0.0);
    norm.input_std.assign(n, 0.0);
    for (std::size_t idx : train_indices) {
        if (idx >= data.size()) throw ConfigError("fit_normalizer: index out of range");
        for (std::size_t j = 0; j < n; ++j) norm.input_mean[j] += data.inputs[idx][j];
        norm.target_mean += data.targets[idx];
    }
    for (std::size_t j = 0; j < n; ++j) norm.input_mean[j] /= count;
    norm.target_mean /= count;
    double target_var = 0.0;
    for (std::size_t idx : train_indices) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = data.inputs[idx][j] - norm.input_mean[j];
            norm.input_std[j] += d * d;
        }
        const double d = data.targets[idx] - norm.target_mean;
        target_var += d * d;
    }
    for (std::size_t j = 0; j < n; ++j) {
        norm.input_std[j] = std::sqrt(norm.input_std[j] / count);
        if (norm.input_std[j] == 0.0) norm.input_std[j] = 1.0;
    }
    norm.target_std = std::sqrt(target_var / count);
    if (norm.target_std == 0.0) norm.target_std = 1.0;
    return norm;
}

FoldPlan make_folds(std::size_t n, std::size_t fold_count, double train_fraction,
                    std::uint64_t seed) {
    if (fold_count == 0) throw ConfigError("make_folds: fold_count must be >= 1");
    const std::size_t n_train = static_cast<std::size_t>(std::llround(
        train_fraction * static_cast<double>(n)));
    if (n_train < 1 || n_train >= n) {
        throw ConfigError("make_folds: train_fraction " + std::to_string(train_fraction) +
                          " leaves no usable split for n = " + std::to_string(n));
    }
    FoldPlan plan;
    plan.train_fraction = train_fraction;
    plan.seed = seed;
    for (std::size_t f = 0; f < fold_count; ++f) {
        Rng rng(derive_seed(seed, f));
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(perm);
        FoldPlan::Fold fold;
        fold.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
        fold.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
        std::sort(fold.train.begin(), fold.train.end());
        std::sort(fold.test.begin(), fold.test.end());
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.feature_names = data.feature_names;
    out.target_name = data.target_name;
    out.inputs.reserve(indices.size());
    out.targets.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= data.size()) throw ConfigError("subset: index out of range");
        out.inputs.push_back(data.inputs[idx]);
        out.targets.push_back(data.targets[idx]);
    }
    return out;
}

}  // namespace uq
