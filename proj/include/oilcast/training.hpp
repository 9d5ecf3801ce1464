#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oilcast/dataset.hpp"
#include "oilcast/models.hpp"
#include "oilcast/rng.hpp"
#include "oilcast/tape.hpp"

namespace oilcast {

struct TrainConfig {
    int batch_size = 16;
    double learning_rate = 1e-3;
    double weight_decay = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int max_epochs = 500;
    int patience = 20; // non-improving epochs tolerated; 0 trains one epoch
    std::uint64_t seed = 42;
    bool shuffle = true;
    double grad_clip = 0.0;        // global-norm clip threshold; 0 disables
    double target_valid_mse = 0.0; // stop once validation MSE reaches this; 0 disables

    void validate() const;
};

/// Mean of squared elementwise differences across the whole batch and
/// horizon, recorded on the tape.
Var mse_loss(GradTape& tape, Var pred, Var target);

/// Same quantity without a tape (validation passes).
double mse_value(const Array2& pred, const Array2& target);

struct AdamWState {
    std::int64_t step = 0;
    std::map<std::string, Array2> m;
    std::map<std::string, Array2> v;
};

/// One decoupled-weight-decay Adam update:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   theta <- theta - lr * mhat / (sqrt(vhat) + eps) - lr * wd * theta
/// Every parameter must have a gradient entry and vice versa.
void adamw_step(ParameterSet& params, const GradMap& grads, AdamWState& state,
                const TrainConfig& config);

/// Fisher-Yates permutation of 0..n-1 driven by the given generator; the
/// per-epoch batch order in train().
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);

struct TrainReport {
    std::vector<double> train_mse; // per epoch, scaled space
    std::vector<double> valid_mse;
    int best_epoch = 0; // 1-based
    double best_valid = 0.0;
    std::string stop_reason; // "early_stop" or "max_epochs"
};

struct TrainResult {
    ParameterSet params; // snapshot at the best validation epoch
    TrainReport report;
};

/// Mini-batch BPTT with seeded shuffling and early stopping on validation
/// MSE. Keeps the parameters of the best validation epoch. Non-finite loss
/// aborts with a TrainError naming epoch and batch. Fully deterministic
/// given (spec, config, data).
TrainResult train(const ModelSpec& spec,
                  const std::vector<WindowedSample>& train_set,
                  const std::vector<WindowedSample>& valid_set,
                  const TrainConfig& config);

/// Batched predictions for a whole sample list, in order (N x horizon).
Array2 predict_samples(const ModelSpec& spec, const ParameterSet& params,
                       const std::vector<WindowedSample>& samples);

/// Target rows of a sample list stacked into an N x horizon matrix.
Array2 stack_targets(const std::vector<WindowedSample>& samples);

void write_train_report_csv(const TrainReport& report, const std::string& path);

} // namespace oilcast
