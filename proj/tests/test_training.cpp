#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oilcast/errors.hpp"
#include "oilcast/training.hpp"
#include "support/test_support.hpp"

using namespace oilcast;

namespace {

// Tiny learnable task: targets are a fixed linear blend of the window.
std::vector<WindowedSample> toy_samples(std::size_t count, int window, int features,
                                        int horizon, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<WindowedSample> out;
    for (std::size_t s = 0; s < count; ++s) {
        WindowedSample sample;
        sample.inputs = testsupport::random_array(rng, window, features);
        sample.anchor_date = Date(static_cast<std::int64_t>(s));
        sample.targets.resize(static_cast<std::size_t>(horizon));
        for (int h = 0; h < horizon; ++h) {
            double acc = 0.0;
            for (int r = 0; r < window; ++r)
                for (int c = 0; c < features; ++c)
                    acc += sample.inputs.at(r, c) * (0.1 * (r + 1) - 0.05 * c);
            sample.targets[static_cast<std::size_t>(h)] =
                std::tanh(acc) * (1.0 - 0.2 * h);
        }
        out.push_back(std::move(sample));
    }
    return out;
}

} // namespace

TEST_SUITE_BEGIN("training");

TEST_CASE("mse examples") {
    GradTape t;
    SUBCASE("identical tensors have zero loss") {
        Var a = t.leaf(Array2::from_rows({{1, 2}, {3, 4}}));
        Var b = t.leaf(Array2::from_rows({{1, 2}, {3, 4}}));
        CHECK(t.scalar(mse_loss(t, a, b)) == 0.0);
    }
    SUBCASE("unit errors average to one") {
        Var a = t.leaf(Array2::from_rows({{1, -1}}));
        Var b = t.leaf(Array2::from_rows({{0, 0}}));
        CHECK(t.scalar(mse_loss(t, a, b)) == 1.0);
    }
    SUBCASE("hand example: pred [1,6] vs target [2,4]") {
        Var a = t.leaf(Array2::from_rows({{1, 6}}));
        Var b = t.leaf(Array2::from_rows({{2, 4}}));
        CHECK(t.scalar(mse_loss(t, a, b)) == doctest::Approx(2.5).epsilon(1e-15));
    }
    SUBCASE("shape mismatch") {
        Var a = t.leaf(Array2(1, 2));
        Var b = t.leaf(Array2(2, 2));
        CHECK_THROWS_AS(mse_loss(t, a, b), ShapeError);
    }
}

TEST_CASE("adamw first step applies the bias-corrected update") {
    TrainConfig config;
    config.learning_rate = 1e-3;
    config.weight_decay = 0.0;
    ParameterSet params;
    params.emplace("w", Array2::full(1, 1, 0.5));
    GradMap grads;
    grads.emplace("w", Array2::full(1, 1, 1.0));
    AdamWState state;
    adamw_step(params, grads, state, config);
    const double expected_delta = -1e-3 * (1.0 / (1.0 + 1e-8));
    CHECK(params.at("w").at(0, 0) ==
          doctest::Approx(0.5 + expected_delta).epsilon(1e-12));
}

TEST_CASE("adamw with zero gradient leaves parameters untouched") {
    TrainConfig config;
    config.weight_decay = 0.0;
    ParameterSet params;
    params.emplace("w", Array2::full(2, 2, 1.25));
    GradMap grads;
    grads.emplace("w", Array2::zeros(2, 2));
    AdamWState state;
    adamw_step(params, grads, state, config);
    CHECK(params.at("w") == Array2::full(2, 2, 1.25));
}

TEST_CASE("adamw with zero gradient and decay is pure shrinkage") {
    TrainConfig config;
    config.learning_rate = 0.1;
    config.weight_decay = 0.5;
    ParameterSet params;
    params.emplace("w", Array2::full(1, 3, 2.0));
    GradMap grads;
    grads.emplace("w", Array2::zeros(1, 3));
    AdamWState state;
    adamw_step(params, grads, state, config);
    for (double v : params.at("w").data)
        CHECK(v == doctest::Approx(2.0 * (1.0 - 0.1 * 0.5)).epsilon(1e-15));
}

TEST_CASE("adamw insists on matching gradient keys") {
    TrainConfig config;
    ParameterSet params;
    params.emplace("w", Array2::zeros(1, 1));
    AdamWState state;
    GradMap missing;
    CHECK_THROWS_AS(adamw_step(params, missing, state, config), ContractError);
    GradMap extra;
    extra.emplace("w", Array2::zeros(1, 1));
    extra.emplace("ghost", Array2::zeros(1, 1));
    CHECK_THROWS_AS(adamw_step(params, extra, state, config), ContractError);
}

TEST_CASE("a tiny-lr adamw step does not increase a quadratic loss") {
    Rng rng(81);
    for (int round = 0; round < 10; ++round) {
        ParameterSet params;
        params.emplace("theta", testsupport::random_array(rng, 2, 3, -2, 2));
        auto loss_of = [](const ParameterSet& p) {
            GradTape t;
            Var v = t.param("theta", p.at("theta"));
            return t.scalar(t.sum(t.mul(v, v)));
        };
        GradTape t;
        Var v = t.param("theta", params.at("theta"));
        GradMap grads = t.backward(t.sum(t.mul(v, v)));
        const double before = loss_of(params);
        TrainConfig config;
        config.learning_rate = 1e-6;
        config.weight_decay = 0.0;
        AdamWState state;
        adamw_step(params, grads, state, config);
        CHECK(loss_of(params) <= before);
    }
}

TEST_CASE("shuffled_indices is a permutation") {
    Rng rng(83);
    for (std::size_t n : {1u, 2u, 17u, 256u}) {
        auto order = shuffled_indices(n, rng);
        REQUIRE(order.size() == n);
        std::sort(order.begin(), order.end());
        for (std::size_t i = 0; i < n; ++i) CHECK(order[i] == i);
    }
}

TEST_CASE("patience zero trains exactly one epoch") {
    ModelSpec spec;
    spec.input_features = 1;
    spec.hidden_size = 3;
    spec.horizon = 1;
    spec.seed = 1;
    const auto train_set = toy_samples(8, 3, 1, 1, 2);
    const auto valid_set = toy_samples(4, 3, 1, 1, 3);
    TrainConfig config;
    config.max_epochs = 50;
    config.patience = 0;
    const TrainResult result = train(spec, train_set, valid_set, config);
    CHECK(result.report.train_mse.size() == 1);
    CHECK(result.report.stop_reason == "early_stop");
}

TEST_CASE("training is bit-reproducible") {
    ModelSpec spec;
    spec.input_features = 2;
    spec.hidden_size = 4;
    spec.horizon = 2;
    spec.seed = 7;
    const auto train_set = toy_samples(20, 4, 2, 2, 11);
    const auto valid_set = toy_samples(6, 4, 2, 2, 12);
    TrainConfig config;
    config.max_epochs = 5;
    config.patience = 5;
    config.seed = 99;
    const TrainResult a = train(spec, train_set, valid_set, config);
    const TrainResult b = train(spec, train_set, valid_set, config);
    CHECK(a.report.train_mse == b.report.train_mse);
    CHECK(a.report.valid_mse == b.report.valid_mse);
    CHECK(a.report.best_epoch == b.report.best_epoch);
    CHECK(a.params == b.params);
}

TEST_CASE("early stopping returns the minimum-validation parameters") {
    ModelSpec spec;
    spec.input_features = 1;
    spec.hidden_size = 4;
    spec.horizon = 1;
    spec.seed = 15;
    const auto train_set = toy_samples(16, 3, 1, 1, 21);
    const auto valid_set = toy_samples(8, 3, 1, 1, 22);
    TrainConfig config;
    config.max_epochs = 30;
    config.patience = 4;
    const TrainResult result = train(spec, train_set, valid_set, config);

    const double min_valid =
        *std::min_element(result.report.valid_mse.begin(), result.report.valid_mse.end());
    CHECK(result.report.best_valid == min_valid);
    CHECK(result.report.valid_mse[static_cast<std::size_t>(result.report.best_epoch - 1)] ==
          min_valid);
    // The returned snapshot reproduces the recorded best loss exactly.
    const Array2 pred = predict_samples(spec, result.params, valid_set);
    CHECK(mse_value(pred, stack_targets(valid_set)) == result.report.best_valid);
}

TEST_CASE("a small model memorizes a small sample set") {
    ModelSpec spec;
    spec.input_features = 2;
    spec.hidden_size = 16;
    spec.head_hidden = 16;
    spec.horizon = 2;
    spec.seed = 31;
    const auto train_set = toy_samples(8, 3, 2, 2, 41);
    TrainConfig config;
    config.max_epochs = 400;
    config.patience = 400;
    config.weight_decay = 0.0;
    config.learning_rate = 3e-3;
    config.batch_size = 8;
    const TrainResult result = train(spec, train_set, train_set, config);
    const double best_train =
        *std::min_element(result.report.train_mse.begin(), result.report.train_mse.end());
    CHECK(best_train <= 1e-3);
}

TEST_CASE("divergence raises a TrainError naming the epoch") {
    ModelSpec spec;
    spec.input_features = 1;
    spec.hidden_size = 3;
    spec.horizon = 1;
    spec.seed = 3;
    const auto train_set = toy_samples(8, 3, 1, 1, 51);
    TrainConfig config;
    config.learning_rate = 1e200;
    config.max_epochs = 10;
    config.patience = 10;
    CHECK_THROWS_WITH_AS(train(spec, train_set, train_set, config),
                         doctest::Contains("epoch"), TrainError);
}

TEST_CASE("empty sample lists are rejected") {
    ModelSpec spec;
    TrainConfig config;
    const std::vector<WindowedSample> none;
    const auto some = toy_samples(4, 3, 1, 3, 61);
    CHECK_THROWS_AS(train(spec, none, some, config), ContractError);
    CHECK_THROWS_AS(train(spec, some, none, config), ContractError);
}

TEST_SUITE_END();
