#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "uq/analysis.hpp"
#include "uq/errors.hpp"
#include "uq/losses.hpp"
#include "uq/rng.hpp"

using uq::Head;
using uq::JointLossSpec;
using uq::RegLoss;

TEST_CASE("regressor losses and subgradients") {
    auto mse = uq::regressor_loss(RegLoss::MSE, 1.0, 3.0);
    CHECK(mse.value == doctest::Approx(4.0));
    CHECK(mse.d_dyr == doctest::Approx(4.0));

    auto mae = uq::regressor_loss(RegLoss::MAE, 1.0, 3.0);
    CHECK(mae.value == doctest::Approx(2.0));
    CHECK(mae.d_dyr == doctest::Approx(1.0));

    auto tie = uq::regressor_loss(RegLoss::MAE, 2.5, 2.5);
    CHECK(tie.value == 0.0);
    CHECK(tie.d_dyr == 0.0);
}

TEST_CASE("head evaluation at xi = 0") {
    auto sig = uq::head_eval(Head::Sigmoid, 0.0);
    CHECK(sig.z == doctest::Approx(0.5));
    CHECK(sig.f == doctest::Approx(std::log(2.0)));
    CHECK(sig.g == doctest::Approx(std::log(2.0)));

    auto soft = uq::head_eval(Head::Softplus, 0.0);
    CHECK(soft.z == doctest::Approx(std::log(2.0)));
    CHECK(soft.f == doctest::Approx(std::log(2.0)));
    CHECK(soft.g == doctest::Approx(-std::log(std::log(2.0))));
    CHECK(soft.g == doctest::Approx(0.366512920581664).epsilon(1e-12));
}

TEST_CASE("sigmoid head survives large xi without overflow") {
    auto he = uq::head_eval(Head::Sigmoid, 50.0);
    CHECK(std::isfinite(he.f));
    CHECK(std::isfinite(he.g));
    // extended-precision references: f = 50 + log1p(e^-50), g = log1p(e^-50)
    const double tail = std::log1p(std::exp(-50.0));
    CHECK(he.f == doctest::Approx(50.0 + tail).epsilon(1e-14));
    CHECK(he.g == doctest::Approx(tail).epsilon(1e-12));
    CHECK(he.g == doctest::Approx(std::exp(-50.0)).epsilon(1e-10));
}

TEST_CASE("no NaN or Inf anywhere in |xi| <= 700") {
    for (Head head : {Head::Sigmoid, Head::Softplus}) {
        for (double xi = -700.0; xi <= 700.0; xi += 12.5) {
            auto he = uq::head_eval(head, xi);
            CHECK(std::isfinite(he.z));
            CHECK(std::isfinite(he.f));
            CHECK(std::isfinite(he.g));
            CHECK(std::isfinite(he.df_dxi));
            CHECK(std::isfinite(he.dg_dxi));
            JointLossSpec spec{head, 0.5, RegLoss::MSE};
            auto s = uq::joint_loss_sample(spec, 2.0, xi);
            CHECK(std::isfinite(s.value));
            CHECK(std::isfinite(s.d_dL));
            CHECK(std::isfinite(s.d_dxi));
        }
    }
}

TEST_CASE("weighting condition holds across the whole xi range") {
    // f > 0, f increasing in z, g decreasing in z; dz/dxi > 0 for both heads,
    // so the xi-space derivative signs carry the z-space statement.
    for (Head head : {Head::Sigmoid, Head::Softplus}) {
        for (double xi = -30.0; xi <= 30.0; xi += 0.25) {
            auto he = uq::head_eval(head, xi);
            CHECK(he.f > 0.0);
            CHECK(he.df_dxi > 0.0);
            CHECK(he.dg_dxi < 0.0);
        }
    }
}

TEST_CASE("joint loss pinned values") {
    auto sig = uq::joint_loss_sample({Head::Sigmoid, 1.0, RegLoss::MSE}, 1.0, 0.0);
    CHECK(sig.value == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(sig.d_dL == doctest::Approx(std::log(2.0)));

    // softplus z = 1 at xi = ln(e - 1): value = 2*1 + lambda*(-ln 1) = 2
    const double xi1 = std::log(std::exp(1.0) - 1.0);
    auto soft = uq::joint_loss_sample({Head::Softplus, 1.0, RegLoss::MSE}, 2.0, xi1);
    CHECK(soft.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("joint loss xi-derivative matches finite differences") {
    uq::Rng rng(301);
    for (int trial = 0; trial < 200; ++trial) {
        const Head head = trial % 2 == 0 ? Head::Sigmoid : Head::Softplus;
        const double L = std::exp(rng.uniform(-2.0, 2.0));
        const double lambda = std::exp(rng.uniform(-2.0, 2.0));
        const double xi = rng.uniform(-8.0, 8.0);
        JointLossSpec spec{head, lambda, RegLoss::MSE};
        auto s = uq::joint_loss_sample(spec, L, xi);
        const double fd = oracle::central_diff(
            [&](double x) { return uq::joint_loss_sample(spec, L, x).value; }, xi, 1e-5);
        CHECK(oracle::rel_err(s.d_dxi, fd) < 1e-8);
    }
}

TEST_CASE("joint loss accepts L = 0 and rejects bad inputs") {
    auto s = uq::joint_loss_sample({Head::Sigmoid, 1.0, RegLoss::MSE}, 0.0, 0.0);
    CHECK(s.value == doctest::Approx(std::log(2.0)));
    CHECK(s.d_dL > 0.0);
    CHECK_THROWS_AS(
        uq::joint_loss_sample({Head::Sigmoid, 1.0, RegLoss::MSE}, -1.0, 0.0), uq::ConfigError);
    CHECK_THROWS_AS(uq::joint_loss_sample({Head::Sigmoid, 1.0, RegLoss::MSE},
                                          std::numeric_limits<double>::quiet_NaN(), 0.0),
                    uq::ConfigError);
}

TEST_CASE("expected loss pinned values and domain") {
    CHECK(uq::expected_loss(Head::Sigmoid, 0.5, 0.1) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(uq::expected_loss(Head::Softplus, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(uq::expected_loss(Head::Sigmoid, 1.0, 0.1), uq::ConfigError);
    CHECK_THROWS_AS(uq::expected_loss(Head::Sigmoid, 0.0, 0.1), uq::ConfigError);
    CHECK_THROWS_AS(uq::expected_loss(Head::Softplus, 0.0, 0.1), uq::ConfigError);
}

TEST_CASE("expected loss at the optimal z recovers the region loss") {
    // log grid over (L, lambda); z comes from the critical point of the
    // region-level loss, so expected_loss must reproduce L almost exactly.
    for (int i = 0; i <= 16; ++i) {
        for (int j = 0; j <= 16; ++j) {
            const double L = std::pow(10.0, -2.0 + 4.0 * i / 16.0);
            const double lambda = std::pow(10.0, -2.0 + 4.0 * j / 16.0);
            for (Head head : {Head::Sigmoid, Head::Softplus}) {
                const double xi_bar = uq::critical_xi(head, L, lambda);
                const double z_bar = uq::head_eval(head, xi_bar).z;
                const double recovered = uq::expected_loss(head, z_bar, lambda);
                CHECK(oracle::rel_err(recovered, L) < 1e-10);
                // critical point: zero xi-derivative of the joint loss
                auto s = uq::joint_loss_sample({head, lambda, RegLoss::MSE}, L, xi_bar);
                CHECK(std::abs(s.d_dxi) <= 1e-10 * (L + lambda));
            }
        }
    }
}

TEST_CASE("maximum-likelihood equivalence identities") {
    // y = mu, tau = 1: joint 0, Gaussian NLL = ln(2 pi)/2
    auto gauss0 = uq::ml_equivalence_check(1.0, 1.0, 1.0, RegLoss::MSE);
    CHECK(gauss0.joint == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(gauss0.nll == doctest::Approx(0.5 * std::log(2.0 * 3.14159265358979324)));

    // y = mu, tau = 2: joint = -ln 2, Laplace NLL = 0
    auto lap0 = uq::ml_equivalence_check(1.0, 1.0, 2.0, RegLoss::MAE);
    CHECK(lap0.joint == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(lap0.nll == doctest::Approx(0.0).epsilon(1e-12));

    uq::Rng rng(303);
    const double ln2pi = std::log(2.0 * 3.14159265358979324);
    for (int trial = 0; trial < 500; ++trial) {
        const double y = rng.uniform(-3.0, 3.0);
        const double mu = rng.uniform(-3.0, 3.0);
        const double tau = std::exp(rng.uniform(-2.0, 2.0));

        auto g = uq::ml_equivalence_check(y, mu, tau, RegLoss::MSE);
        const double gauss_nll =
            0.5 * ln2pi - 0.5 * std::log(tau) + 0.5 * (y - mu) * (y - mu) * tau;
        CHECK(std::abs(g.nll - gauss_nll) < 1e-12 * (1.0 + std::abs(gauss_nll)));
        CHECK(std::abs(g.joint - (2.0 * g.nll - ln2pi)) < 1e-12 * (1.0 + std::abs(g.joint)));

        auto l = uq::ml_equivalence_check(y, mu, tau, RegLoss::MAE);
        const double lap_nll = -std::log(0.5 * tau) + std::abs(y - mu) * tau;
        CHECK(std::abs(l.nll - lap_nll) < 1e-12 * (1.0 + std::abs(lap_nll)));
        CHECK(std::abs(l.joint - (l.nll - std::log(2.0))) < 1e-12 * (1.0 + std::abs(l.joint)));
    }
}

TEST_CASE("stable kernel functions behave at extremes") {
    CHECK(uq::softplus(0.0) == doctest::Approx(std::log(2.0)));
    CHECK(uq::softplus(800.0) == doctest::Approx(800.0));
    CHECK(uq::softplus(-800.0) == 0.0);
    CHECK(uq::sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(std::isfinite(uq::log_softplus(-700.0)));
    CHECK(uq::log_softplus(-50.0) == doctest::Approx(-50.0).epsilon(1e-10));
    for (double y : {1e-6, 0.1, 1.0, 20.0, 35.0, 100.0}) {
        CHECK(uq::softplus(uq::softplus_inverse(y)) == doctest::Approx(y).epsilon(1e-12));
    }
}
