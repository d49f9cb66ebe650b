#include "uq/losses.hpp"

#include <cmath>
#include <numbers>

#include "uq/errors.hpp"

namespace uq {

RegLossEval regressor_loss(RegLoss kind, double y, double y_r) {
    const double r = y - y_r;
    if (kind == RegLoss::MSE) return {r * r, -2.0 * r};
    // MAE; the subgradient at r = 0 is taken as 0.
    if (r > 0.0) return {r, -1.0};
    if (r < 0.0) return {-r, 1.0};
    return {0.0, 0.0};
}

HeadEval head_eval(Head variant, double xi) {
    if (!std::isfinite(xi)) throw ConfigError("head_eval: non-finite xi");
    const double s = sigmoid(xi);
    if (variant == Head::Sigmoid) {
        // f = softplus(xi), g = softplus(-xi); f' = s, g' = -(1-s) = s - 1
        return {s, softplus(xi), softplus(-xi), s, s - 1.0};
    }
    const double z = softplus(xi);
    // f = z, g = -ln z; f' = s, g' = -s/z
    return {z, z, -log_softplus(xi), s, -s / z};
}

PerSampleLoss joint_loss_sample(const JointLossSpec& spec, double L, double xi) {
    if (!(L >= 0.0) || !std::isfinite(L)) {
        throw ConfigError("joint_loss_sample: regressor loss must be finite and >= 0");
    }
    if (!std::isfinite(xi)) throw ConfigError("joint_loss_sample: non-finite xi");
    const HeadEval h = head_eval(spec.variant, xi);
    return {L * h.f + spec.lambda * h.g,
            h.f,
            L * h.df_dxi + spec.lambda * h.dg_dxi};
}

double expected_loss(Head variant, double z, double lambda) {
    if (variant == Head::Sigmoid) {
        if (!(z > 0.0 && z < 1.0)) {
            throw ConfigError("expected_loss: sigmoid head needs z in (0,1)");
        }
        return lambda * (1.0 / z - 1.0);
    }
    if (!(z > 0.0)) throw ConfigError("expected_loss: softplus head needs z > 0");
    return lambda / z;
}

MlEquivalence ml_equivalence_check(double y, double mu, double tau, RegLoss kind) {
    if (!(tau > 0.0)) throw ConfigError("ml_equivalence_check: tau must be positive");
    const JointLossSpec spec{Head::Softplus, 1.0, kind};
    const double L = regressor_loss(kind, y, mu).value;
    const double joint = joint_loss_sample(spec, L, softplus_inverse(tau)).value;

    double nll;
    if (kind == RegLoss::MSE) {
        // Gaussian with mean mu, variance 1/tau
        const double r = y - mu;
        nll = 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(tau) +
              0.5 * r * r * tau;
    } else {
        // Laplace density (tau/2) e^(-|y-mu| tau)
        nll = -std::log(0.5 * tau) + std::abs(y - mu) * tau;
    }
    return {joint, nll};
}

}  // namespace uq
