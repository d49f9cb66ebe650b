#pragma once

// Error metrics, the uncertainty-ordered retention curve with its normalized
// area, and per-region summaries for piecewise experiments.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uq/data.hpp"
#include "uq/losses.hpp"

namespace uq {

double rmse(const std::vector<double>& y, const std::vector<double>& y_hat);
double mae(const std::vector<double>& y, const std::vector<double>& y_hat);

enum class ErrKind { RMSE, MAE };

// values[n] is the error over the N-n samples left after removing the n
// samples with the highest uncertainty.
struct RetentionCurve {
    std::vector<double> values;
    ErrKind kind;
};

// errors_per_sample holds squared residuals for RMSE (the curve then takes
// sqrt of their mean) and absolute residuals for MAE. Ties in uncertainty
// are broken by original index (stable), so the curve is deterministic.
RetentionCurve retention_curve(const std::vector<double>& errors_per_sample,
                               const std::vector<double>& uncertainties, ErrKind kind);

// Trapezoid area normalized by N-1: (1/(N-1)) * sum (v[n]+v[n+1])/2.
double auc(const RetentionCurve& curve);

struct RegionReport {
    struct Region {
        double lo, hi;
        std::size_t count;
        std::optional<double> mean_regressor_loss;
        std::optional<double> mean_expected_loss;
    };
    std::vector<Region> regions;
};

// Per-sample model output as the region report consumes it.
struct PointPrediction {
    double y_r;
    double expected_loss;
};

// data must be 1-D; regions are [lo, hi) intervals except the last, which is
// closed. Empty regions report absent means.
RegionReport region_report(
    const Dataset& data, const std::function<PointPrediction(const std::vector<double>&)>& model,
    const std::vector<std::pair<double, double>>& region_bounds, RegLoss kind);

}  // namespace uq
