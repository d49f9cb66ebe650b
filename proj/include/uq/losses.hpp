#pragma once

// Regressor losses, the two uncertainty heads, and the joint per-sample loss
//
//   loss(sample) = L_r(y, y_r) * f(z) + lambda * g(z)
//
// evaluated in xi-space, where xi is the quantifier's final pre-activation
// and z = Z(xi) is the head's output nonlinearity:
//
//   sigmoid head:  z = 1/(1+e^-xi) in (0,1),   f(z) = -ln(1-z), g(z) = -ln z
//   softplus head: z = ln(1+e^xi)  in (0,inf), f(z) = z,        g(z) = -ln z
//
// With the sigmoid head, f(Z(xi)) = softplus(xi) and g(Z(xi)) = softplus(-xi),
// so every quantity here reduces to stable softplus/log-sigmoid evaluations.
// Both heads satisfy: f > 0, f' > 0, g' < 0, and L*f + lambda*g has a finite
// minimum in xi for every L > 0. No operation here produces NaN or Inf for
// |xi| <= 700.

#include <cmath>

namespace uq {

enum class Head { Sigmoid, Softplus };
enum class RegLoss { MSE, MAE };

struct JointLossSpec {
    Head variant = Head::Sigmoid;
    double lambda = 1.0;  // > 0
    RegLoss regressor_loss = RegLoss::MSE;
};

// value and d(value)/d(y_r)
struct RegLossEval {
    double value;
    double d_dyr;
};

struct HeadEval {
    double z;
    double f;
    double g;
    double df_dxi;
    double dg_dxi;
};

// Per-sample joint loss with the two partials the training loop consumes:
// d_dL scales the regressor gradient (it equals f(z) and is always > 0),
// d_dxi drives the quantifier.
struct PerSampleLoss {
    double value;
    double d_dL;
    double d_dxi;
};

// softplus(x) = ln(1+e^x), overflow-safe on both sides.
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// ln(softplus(x)). For x << 0, softplus(x) ~= e^x and the log is ~= x; the
// direct form would round softplus(x) to e^x first and lose nothing, but
// going through the subnormal range is avoided entirely this way.
inline double log_softplus(double x) {
    if (x < -36.0) return x + std::log1p(-0.5 * std::exp(x));
    return std::log(softplus(x));
}

// Inverse of softplus: ln(e^y - 1) for y > 0.
inline double softplus_inverse(double y) {
    if (y > 30.0) return y + std::log1p(-std::exp(-y));
    return std::log(std::expm1(y));
}

RegLossEval regressor_loss(RegLoss kind, double y, double y_r);

HeadEval head_eval(Head variant, double xi);

// L may be 0 (the joint loss then reduces to lambda*g); L < 0 is rejected.
PerSampleLoss joint_loss_sample(const JointLossSpec& spec, double L, double xi);

// The quantifier's estimate of the locally averaged regressor loss,
// -lambda * g'(z) / f'(z). Sigmoid: lambda*(1/z - 1); softplus: lambda/z.
// z must lie in the head's output interval.
double expected_loss(Head variant, double z, double lambda);

struct MlEquivalence {
    double joint;  // joint loss at (softplus head, lambda = 1, xi = softplus^-1(tau))
    double nll;    // exact negative log-likelihood of the matching density
};

// Evaluates both sides of the maximum-likelihood correspondence:
//   MSE: joint = (y-mu)^2 tau - ln tau = 2 * NLL_gauss(y; mu, var = 1/tau) - ln(2 pi)
//   MAE: joint = |y-mu| tau - ln tau = NLL_laplace(y; mu, tau) - ln 2,
// where the Laplace density is (tau/2) e^(-|y-mu| tau).
MlEquivalence ml_equivalence_check(double y, double mu, double tau, RegLoss kind);

}  // namespace uq
