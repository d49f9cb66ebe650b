#include "uq/analysis.hpp"

#include <cmath>
#include <cstddef>

#include "uq/errors.hpp"

namespace uq {

namespace {

void require_positive(double L, double lambda, const char* where) {
    if (!(L > 0.0) || !std::isfinite(L) || !(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ConfigError(std::string(where) + ": L and lambda must be positive and finite");
    }
}

}  // namespace

double critical_xi(Head variant, double L, double lambda) {
    require_positive(L, lambda, "critical_xi");
    if (variant == Head::Sigmoid) return std::log(lambda) - std::log(L);
    return softplus_inverse(lambda / L);
}

double regressor_grad_scale(Head variant, double L, double lambda) {
    require_positive(L, lambda, "regressor_grad_scale");
    if (variant == Head::Sigmoid) return std::log1p(lambda / L);
    return lambda / L;
}

double quantifier_grad_scale(Head variant, double L, double lambda) {
    require_positive(L, lambda, "quantifier_grad_scale");
    if (variant == Head::Sigmoid) return L * lambda / (L + lambda);
    const double w = -std::expm1(-lambda / L);  // 1 - e^(-lambda/L)
    return L * L / lambda * w * w;
}

ContributionReport contribution_ratios(Head variant, double L1, double L2, double lambda) {
    require_positive(L1, lambda, "contribution_ratios");
    require_positive(L2, lambda, "contribution_ratios");
    if (L1 > L2) {
        throw ConfigError("contribution_ratios: requires L1 <= L2 (clean region first)");
    }
    ContributionReport rep;
    rep.variant = variant;
    rep.lambda = lambda;
    rep.regressor_scale_clean = regressor_grad_scale(variant, L1, lambda);
    rep.regressor_scale_noisy = regressor_grad_scale(variant, L2, lambda);
    rep.quantifier_scale_clean = quantifier_grad_scale(variant, L1, lambda);
    rep.quantifier_scale_noisy = quantifier_grad_scale(variant, L2, lambda);
    if (variant == Head::Sigmoid) {
        rep.R = std::log1p(lambda / L1) / std::log1p(lambda / L2);
        rep.Q = L1 * (L2 + lambda) / (L2 * (L1 + lambda));
    } else {
        rep.R = L2 / L1;
        const double ratio = (L1 * -std::expm1(-lambda / L1)) / (L2 * -std::expm1(-lambda / L2));
        rep.Q = ratio * ratio;
    }
    return rep;
}

double mu0() {
    static const double root = [] {
        double lo = 0.1, hi = 3.0;
        double mid = 0.5 * (lo + hi);
        for (std::size_t iter = 0; iter < 200; ++iter) {
            mid = 0.5 * (lo + hi);
            const double r = std::exp(mid) - 1.0 - 2.0 * mid;
            if (std::abs(r) < 1e-12) break;
            // e^mu - 1 - 2mu is negative between 0 and the root
            if (r < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return mid;
    }();
    return root;
}

double weighted_joint_loss(const std::vector<RegionSummary>& regions,
                           const std::vector<double>& xis, Head variant, double lambda) {
    if (regions.size() != xis.size()) {
        throw ConfigError("weighted_joint_loss: regions and xis must have equal length");
    }
    double weight_sum = 0.0;
    for (const auto& region : regions) weight_sum += region.weight;
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw ConfigError("weighted_joint_loss: region weights must sum to 1");
    }
    const JointLossSpec spec{variant, lambda, RegLoss::MSE};
    double total = 0.0;
    for (std::size_t j = 0; j < regions.size(); ++j) {
        total += regions[j].weight * joint_loss_sample(spec, regions[j].L, xis[j]).value;
    }
    return total;
}

}  // namespace uq
