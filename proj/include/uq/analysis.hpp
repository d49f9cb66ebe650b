#pragma once

// Closed-form analysis of the region-level loss
//
//   M(L, xi) = L * f(Z(xi)) + lambda * g(Z(xi)),
//
// which is convex in xi for both heads with a unique minimizer xi_bar:
//
//   sigmoid:  xi_bar = ln(lambda/L),         f(Z(xi_bar)) = ln(1 + lambda/L),
//             d2M/dxi2 at xi_bar = L*lambda/(L+lambda)
//   softplus: xi_bar = ln(e^(lambda/L) - 1), f(Z(xi_bar)) = lambda/L,
//             curvature scale (L^2/lambda) * (1 - e^(-lambda/L))^2
//
// f(Z(xi_bar)) is the factor multiplying the regressor's gradient once the
// quantifier has settled, and the curvature at xi_bar sets how fast the
// quantifier itself moves. Ratios of these scales between a clean region
// (loss L1) and a noisy one (loss L2 >= L1) give the relative learning
// speeds R (regressor) and Q (quantifier).

#include <vector>

#include "uq/losses.hpp"

namespace uq {

// One region of a partition of the input space: L is the region's average
// regressor loss, weight its sample fraction M_j/N.
struct RegionSummary {
    double L;
    double weight;
};

struct ContributionReport {
    Head variant;
    double lambda;
    double regressor_scale_clean;
    double regressor_scale_noisy;
    double quantifier_scale_clean;
    double quantifier_scale_noisy;
    double R;  // clean/noisy regressor-gradient ratio, >= 1 for L1 <= L2
    double Q;  // clean/noisy quantifier-speed ratio, <= 1 for L1 <= L2
};

// Unique global minimizer of M(L, .) in xi. L, lambda > 0.
double critical_xi(Head variant, double L, double lambda);

// f(Z(xi_bar)): sigmoid ln(1+lambda/L), softplus lambda/L.
double regressor_grad_scale(Head variant, double L, double lambda);

// Curvature of M at xi_bar: sigmoid L*lambda/(L+lambda), softplus
// (L^2/lambda)*(1-e^(-lambda/L))^2. The softplus scale tends to lambda as
// lambda -> 0, to L^2/lambda as lambda -> inf, and peaks at lambda = mu0*L.
double quantifier_grad_scale(Head variant, double L, double lambda);

// Requires 0 < L1 <= L2 (clean region first).
// Sigmoid: R = ln(1+lambda/L1)/ln(1+lambda/L2), Q = L1(L2+lambda)/(L2(L1+lambda)).
// Softplus: R = L2/L1 (independent of lambda),
//           Q = (L1(1-e^(-lambda/L1)) / (L2(1-e^(-lambda/L2))))^2.
ContributionReport contribution_ratios(Head variant, double L1, double L2, double lambda);

// Positive root of e^mu = 1 + 2*mu (about 1.2564), located by bisection on
// [0.1, 3] until |e^mu - 1 - 2 mu| < 1e-12. The softplus quantifier speed is
// maximal over lambda at lambda = mu0*L, where it equals 4*mu0/(1+2*mu0)^2 * L.
double mu0();

// Weighted sum over a partition: sum_j weight_j * M(L_j, xi_j).
// Weights must sum to 1 within 1e-9.
double weighted_joint_loss(const std::vector<RegionSummary>& regions,
                           const std::vector<double>& xis, Head variant, double lambda);

}  // namespace uq
