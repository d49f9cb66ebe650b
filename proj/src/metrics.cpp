#include "uq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uq/errors.hpp"

namespace uq {

namespace {

void check_pair(const std::vector<double>& y, const std::vector<double>& y_hat,
                const char* what) {
    if (y.empty()) throw ConfigError(std::string(what) + ": empty input");
    if (y.size() != y_hat.size()) throw ConfigError(std::string(what) + ": length mismatch");
}

}  // namespace

double rmse(const std::vector<double>& y, const std::vector<double>& y_hat) {
    check_pair(y, y_hat, "rmse");
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - y_hat[i];
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
}

double mae(const std::vector<double>& y, const std::vector<double>& y_hat) {
    check_pair(y, y_hat, "mae");
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += std::abs(y[i] - y_hat[i]);
    return acc / static_cast<double>(y.size());
}

RetentionCurve retention_curve(const std::vector<double>& errors_per_sample,
                               const std::vector<double>& uncertainties, ErrKind kind) {
    const std::size_t n = errors_per_sample.size();
    if (n != uncertainties.size()) throw ConfigError("retention_curve: length mismatch");
    if (n < 2) throw ConfigError("retention_curve: need at least 2 samples");

    // Removal order: descending uncertainty, ties by original index.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&uncertainties](std::size_t a, std::size_t b) {
        return uncertainties[a] > uncertainties[b];
    });

    RetentionCurve curve;
    curve.kind = kind;
    curve.values.resize(n);

    // Up to moderate sizes the remaining error is re-summed in original index
    // order at every step, which keeps the values bit-identical to a naive
    // recomputation over the remaining set. Larger inputs switch to suffix
    // sums over the removal order (same quantity, different rounding).
    if (n <= 4096) {
        std::vector<char> removed(n, 0);
        for (std::size_t step = 0; step < n; ++step) {
            if (step > 0) removed[order[step - 1]] = 1;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!removed[i]) acc += errors_per_sample[i];
            }
            const double mean = acc / static_cast<double>(n - step);
            curve.values[step] = kind == ErrKind::RMSE ? std::sqrt(mean) : mean;
        }
    } else {
        double acc = 0.0;
        for (std::size_t step = n; step-- > 0;) {
            acc += errors_per_sample[order[step]];
            const double mean = acc / static_cast<double>(n - step);
            curve.values[step] = kind == ErrKind::RMSE ? std::sqrt(mean) : mean;
        }
    }
    return curve;
}

double auc(const RetentionCurve& curve) {
    const std::size_t n = curve.values.size();
    if (n < 2) throw ConfigError("auc: curve needs at least 2 points");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        acc += 0.5 * (curve.values[i] + curve.values[i + 1]);
    }
    return acc / static_cast<double>(n - 1);
}

RegionReport region_report(
    const Dataset& data, const std::function<PointPrediction(const std::vector<double>&)>& model,
    const std::vector<std::pair<double, double>>& region_bounds, RegLoss kind) {
    if (data.dim() != 1) throw ConfigError("region_report: inputs must be 1-D");
    RegionReport report;
    for (const auto& [lo, hi] : region_bounds) {
        report.regions.push_back({lo, hi, 0, std::nullopt, std::nullopt});
    }
    std::vector<double> loss_sum(region_bounds.size(), 0.0);
    std::vector<double> expected_sum(region_bounds.size(), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double x = data.inputs[i][0];
        for (std::size_t r = 0; r < region_bounds.size(); ++r) {
            const auto& [lo, hi] = region_bounds[r];
            const bool last = r + 1 == region_bounds.size();
            if (x >= lo && (x < hi || (last && x <= hi))) {
                const PointPrediction p = model(data.inputs[i]);
                loss_sum[r] += regressor_loss(kind, data.targets[i], p.y_r).value;
                expected_sum[r] += p.expected_loss;
                report.regions[r].count += 1;
                break;
            }
        }
    }
    for (std::size_t r = 0; r < report.regions.size(); ++r) {
        if (report.regions[r].count > 0) {
            const double c = static_cast<double>(report.regions[r].count);
            report.regions[r].mean_regressor_loss = loss_sum[r] / c;
            report.regions[r].mean_expected_loss = expected_sum[r] / c;
        }
    }
    return report;
}

}  // namespace uq
