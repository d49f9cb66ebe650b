#include <doctest.h>

#include <cmath>
#include <vector>

#include "uq/data.hpp"
#include "uq/errors.hpp"
#include "uq/losses.hpp"
#include "uq/nn.hpp"
#include "uq/rng.hpp"
#include "uq/train.hpp"

using uq::Act;
using uq::Dataset;
using uq::Head;
using uq::LayerSpec;
using uq::Normalizer;
using uq::RegLoss;
using uq::TrainConfig;
using uq::TrainedPair;

namespace {

TrainConfig small_cfg(std::size_t input_dim, Head head = Head::Sigmoid, double lambda = 0.1) {
    TrainConfig cfg;
    cfg.loss_spec = {head, lambda, RegLoss::MSE};
    cfg.epochs = 100;
    cfg.minibatch = 10;
    cfg.learning_rate = 0.02;
    cfg.momentum = 0.9;
    cfg.dropout = 0.0;
    cfg.seed = 5;
    cfg.regressor_arch = uq::regressor_arch(input_dim, {{10, Act::Tanh}, {10, Act::Tanh}});
    cfg.quantifier_arch =
        uq::quantifier_arch(input_dim, {{10, Act::Tanh}, {10, Act::Tanh}}, head);
    return cfg;
}

double mean_joint_loss(const TrainedPair& pair, const Dataset& data) {
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double y_r = uq::forward(pair.regressor, data.inputs[i])[0];
        uq::ForwardCache cache;
        uq::forward(pair.quantifier, data.inputs[i], uq::Mode::Eval, 0.0, nullptr, &cache);
        const double L =
            uq::regressor_loss(pair.loss_spec.regressor_loss, data.targets[i], y_r).value;
        acc += uq::joint_loss_sample(pair.loss_spec, L, cache.last_pre()).value;
    }
    return acc / static_cast<double>(data.size());
}

Dataset constant_dataset(std::size_t n, double c, std::uint64_t seed) {
    uq::Rng rng(seed);
    Dataset data;
    data.feature_names = {"x"};
    data.target_name = "y";
    for (std::size_t i = 0; i < n; ++i) {
        data.inputs.push_back({rng.uniform01()});
        data.targets.push_back(c);
    }
    return data;
}

}  // namespace

TEST_CASE("zero-epoch training leaves the initialization untouched") {
    Dataset a = uq::gen_smooth(50, 1);
    Dataset b = uq::gen_smooth(50, 2);
    TrainConfig cfg = small_cfg(1);
    cfg.epochs = 0;
    TrainedPair pa = uq::train_pair(a, cfg, Normalizer::identity(1));
    TrainedPair pb = uq::train_pair(b, cfg, Normalizer::identity(1));
    CHECK(pa.history.empty());
    // init depends only on the config, not the data
    CHECK(pa.regressor.weights == pb.regressor.weights);
    CHECK(pa.quantifier.weights == pb.quantifier.weights);
}

TEST_CASE("training is bitwise deterministic under a fixed seed") {
    Dataset data = uq::gen_smooth(80, 3);
    TrainConfig cfg = small_cfg(1);
    cfg.epochs = 5;
    cfg.dropout = 0.2;
    TrainedPair p1 = uq::train_pair(data, cfg, Normalizer::identity(1));
    TrainedPair p2 = uq::train_pair(data, cfg, Normalizer::identity(1));
    CHECK(p1.regressor.weights == p2.regressor.weights);
    CHECK(p1.quantifier.weights == p2.quantifier.weights);
    CHECK(p1.history == p2.history);
    CHECK(p1.history.size() == 5);
    for (double h : p1.history) CHECK(std::isfinite(h));
}

TEST_CASE("one small step on one sample decreases its joint loss") {
    for (int trial = 0; trial < 100; ++trial) {
        Dataset one;
        uq::Rng rng(900 + trial);
        one.inputs = {{rng.uniform(-1.0, 1.0)}};
        one.targets = {rng.uniform(-1.0, 1.0)};
        one.feature_names = {"x"};
        one.target_name = "y";

        TrainConfig cfg = small_cfg(1, trial % 2 == 0 ? Head::Sigmoid : Head::Softplus, 0.5);
        cfg.seed = static_cast<std::uint64_t>(trial);
        cfg.minibatch = 1;
        cfg.learning_rate = 1e-4;

        cfg.epochs = 0;
        TrainedPair before = uq::train_pair(one, cfg, Normalizer::identity(1));
        cfg.epochs = 1;
        TrainedPair after = uq::train_pair(one, cfg, Normalizer::identity(1));
        CHECK(mean_joint_loss(after, one) < mean_joint_loss(before, one));
    }
}

TEST_CASE("constant noiseless targets drive expected loss to zero") {
    const double c = 0.4;
    Dataset data = constant_dataset(200, c, 13);
    TrainConfig cfg = small_cfg(1);
    cfg.epochs = 400;
    TrainedPair pair = uq::train_pair(data, cfg, Normalizer::identity(1));
    for (double x = 0.05; x <= 0.95; x += 0.1) {
        const uq::Prediction p = uq::predict(pair, {x});
        CHECK(std::abs(p.y_r - c) <= 1e-2);
        CHECK(p.expected_loss <= 1e-2);
    }
}

TEST_CASE("single-sample training drives the quantifier toward certainty") {
    Dataset one;
    one.inputs = {{0.3}};
    one.targets = {0.7};
    one.feature_names = {"x"};
    one.target_name = "y";
    TrainConfig cfg = small_cfg(1);
    cfg.minibatch = 1;
    cfg.epochs = 4000;
    cfg.learning_rate = 0.05;
    TrainedPair pair = uq::train_pair(one, cfg, Normalizer::identity(1));
    const uq::Prediction p = uq::predict(pair, {0.3});
    CHECK(std::abs(p.y_r - 0.7) < 1e-2);
    CHECK(p.z > 0.5);
    CHECK(p.expected_loss < 1e-3);
}

TEST_CASE("divergence aborts with the offending epoch") {
    // optimizer blowup: output-layer weights compound through saturated tanh
    // until the squared error overflows
    Dataset data = uq::gen_smooth(100, 21);
    TrainConfig cfg = small_cfg(1);
    cfg.learning_rate = 1e6;
    cfg.epochs = 50;
    CHECK_THROWS_AS(static_cast<void>(uq::train_standard(data, cfg, Normalizer::identity(1))),
                    uq::DivergenceError);

    // the joint path guards the same way; a target whose square overflows
    // makes the very first epoch loss non-finite
    Dataset bad = constant_dataset(20, 1e200, 23);
    TrainConfig cfg2 = small_cfg(1);
    cfg2.epochs = 3;
    CHECK_THROWS_AS(static_cast<void>(uq::train_pair(bad, cfg2, Normalizer::identity(1))),
                    uq::DivergenceError);
}

TEST_CASE("standard regressor fits noiseless linear data") {
    Dataset data;
    data.feature_names = {"x"};
    data.target_name = "y";
    uq::Rng rng(31);
    for (int i = 0; i < 150; ++i) {
        const double x = rng.uniform01();
        data.inputs.push_back({x});
        data.targets.push_back(0.5 * x + 0.2);
    }

    TrainConfig cfg = small_cfg(1);
    cfg.epochs = 300;
    uq::TrainedRegressor standard = uq::train_standard(data, cfg, Normalizer::identity(1));
    TrainedPair joint = uq::train_pair(data, cfg, Normalizer::identity(1));

    double sq_std = 0.0, sq_joint = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double e1 = uq::predict_standard(standard, data.inputs[i]) - data.targets[i];
        const double e2 = uq::predict(joint, data.inputs[i]).y_r - data.targets[i];
        sq_std += e1 * e1;
        sq_joint += e2 * e2;
    }
    CHECK(std::sqrt(sq_std / data.size()) < 1e-2);
    CHECK(std::sqrt(sq_joint / data.size()) < 1e-2);

    // determinism and the zero-epoch contract
    uq::TrainedRegressor r1 = uq::train_standard(data, cfg, Normalizer::identity(1));
    CHECK(r1.regressor.weights == standard.regressor.weights);
    cfg.epochs = 0;
    uq::TrainedRegressor r0 = uq::train_standard(data, cfg, Normalizer::identity(1));
    CHECK(r0.history.empty());
}

TEST_CASE("post-hoc quantifier training freezes the regressor") {
    // two noise levels around a zero mean; the frozen net is exactly the mean
    Dataset data;
    data.feature_names = {"x"};
    data.target_name = "y";
    uq::Rng rng(41);
    for (int i = 0; i < 600; ++i) {
        const double x = rng.uniform01();
        const double sigma = x < 0.5 ? 0.1 : 1.0;
        data.inputs.push_back({x});
        data.targets.push_back(rng.normal(0.0, sigma));
    }

    TrainConfig cfg = small_cfg(1);
    uq::TrainedRegressor frozen;
    frozen.regressor = uq::mlp_new(cfg.regressor_arch, 1);
    for (auto& w : frozen.regressor.weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : frozen.regressor.biases) std::fill(b.begin(), b.end(), 0.0);
    frozen.kind = RegLoss::MSE;
    frozen.normalizer = Normalizer::identity(1);
    const std::vector<std::vector<double>> weights_before = frozen.regressor.weights;

    cfg.epochs = 800;
    cfg.learning_rate = 0.05;
    TrainedPair pair = uq::train_quantifier_posthoc(frozen, data, cfg);

    CHECK(pair.regressor.weights == weights_before);
    CHECK(frozen.regressor.weights == weights_before);

    // predicted expected squared error tracks sigma^2 per half within 30%;
    // a strip around the noise boundary stays out because the net smooths
    // the transition there
    double left = 0.0, right = 0.0;
    int nl = 0, nr = 0;
    for (double x = 0.05; x < 0.42; x += 0.05) {
        left += uq::predict(pair, {x}).expected_loss;
        ++nl;
    }
    for (double x = 0.62; x < 1.0; x += 0.05) {
        right += uq::predict(pair, {x}).expected_loss;
        ++nr;
    }
    left /= nl;
    right /= nr;
    CHECK(left > 0.01 * 0.7);
    CHECK(left < 0.01 * 1.3);
    CHECK(right > 1.0 * 0.7);
    CHECK(right < 1.0 * 1.3);
}

TEST_CASE("predict applies the head interpretation and unit conversion") {
    TrainConfig cfg = small_cfg(1);
    cfg.epochs = 0;
    Dataset dummy = constant_dataset(5, 0.0, 3);
    TrainedPair pair = uq::train_pair(dummy, cfg, Normalizer::identity(1));
    for (auto& w : pair.quantifier.weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : pair.quantifier.biases) std::fill(b.begin(), b.end(), 0.0);
    for (auto& w : pair.regressor.weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : pair.regressor.biases) std::fill(b.begin(), b.end(), 0.0);

    // xi = 0 gives z = 1/2; sigmoid expected loss = lambda(1/z - 1) = lambda
    uq::Prediction p = uq::predict(pair, {0.4});
    CHECK(p.z == doctest::Approx(0.5));
    CHECK(p.expected_loss == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(p.y_r == doctest::Approx(0.0));

    // target scaling: expected MSE picks up std^2, MAE picks up std
    pair.normalizer.target_std = 3.0;
    pair.normalizer.target_mean = 10.0;
    uq::Prediction scaled = uq::predict(pair, {0.4});
    CHECK(scaled.expected_loss == doctest::Approx(0.1 * 9.0).epsilon(1e-12));
    CHECK(scaled.y_r == doctest::Approx(10.0));

    pair.loss_spec.regressor_loss = RegLoss::MAE;
    uq::Prediction mae_scaled = uq::predict(pair, {0.4});
    CHECK(mae_scaled.expected_loss == doctest::Approx(0.1 * 3.0).epsilon(1e-12));
}

TEST_CASE("predict composes forward with the expected-loss formula") {
    Dataset data = uq::gen_smooth(60, 51);
    for (Head head : {Head::Sigmoid, Head::Softplus}) {
        TrainConfig cfg = small_cfg(1, head, 0.3);
        cfg.epochs = 3;
        TrainedPair pair = uq::train_pair(data, cfg, Normalizer::identity(1));
        for (double x = 0.1; x < 1.0; x += 0.17) {
            const uq::Prediction p = uq::predict(pair, {x});
            const double z = uq::forward(pair.quantifier, {x})[0];
            CHECK(p.z == doctest::Approx(z).epsilon(1e-12));
            CHECK(p.expected_loss ==
                  doctest::Approx(uq::expected_loss(head, z, 0.3)).epsilon(1e-9));
        }
    }
}

TEST_CASE("the ML recipe is the softplus head at lambda 1") {
    TrainConfig cfg = uq::ml_preset(RegLoss::MSE);
    CHECK(cfg.loss_spec.variant == Head::Softplus);
    CHECK(cfg.loss_spec.lambda == 1.0);
    CHECK(cfg.label == "ML");

    // its per-sample loss is an affine shift of the Gaussian NLL
    const double y = 0.7, mu = 0.1, tau = 2.3;
    auto eq = uq::ml_equivalence_check(y, mu, tau, RegLoss::MSE);
    const double ln2pi = std::log(2.0 * 3.14159265358979324);
    CHECK(eq.joint == doctest::Approx(2.0 * eq.nll - ln2pi).epsilon(1e-12));
}

TEST_CASE("config validation rejects inconsistent setups") {
    TrainConfig cfg = small_cfg(1);
    cfg.loss_spec.lambda = -1.0;
    CHECK_THROWS_AS(uq::validate(cfg, 1), uq::ConfigError);

    cfg = small_cfg(1);
    cfg.minibatch = 0;
    CHECK_THROWS_AS(uq::validate(cfg, 1), uq::ConfigError);

    cfg = small_cfg(1);
    cfg.quantifier_arch.back().activation = Act::Linear;
    CHECK_THROWS_AS(uq::validate(cfg, 1), uq::ConfigError);

    cfg = small_cfg(2);
    CHECK_THROWS_AS(uq::validate(cfg, 1), uq::ConfigError);
}
