#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oilcast/config.hpp"
#include "oilcast/ensemble.hpp"

namespace oilcast::pipeline {

/// Output files a stage wrote, relative to the experiment output directory.
struct StageResult {
    std::vector<std::string> files;
};

/// Ingests every configured series, left-joins onto the target, fills gaps,
/// fits the train-only scaler, and writes the audit artifacts:
/// prepared.csv, scaler.json, decomposition.csv, split_summary.json.
StageResult prepare(const ExperimentConfig& config);

/// Correlates every candidate against the target and writes
/// correlations.csv plus selected_features.json.
StageResult select(const ExperimentConfig& config);

/// Trains one named variant and writes runs/<name>/{checkpoint.bin,
/// train_report.csv, metrics.json, predictions.csv}.
StageResult train_model(const ExperimentConfig& config, const std::string& model_name);

struct EnsembleOptions {
    std::optional<EnsembleWeights> weights_override;
};

/// Runs the three scenarios, searches fusion weights on the validation
/// split (unless overridden), evaluates on test, and writes
/// runs/ers-bi-gru/{weights.json, forecasts.csv, predictions.csv,
/// metrics.json, per-scenario reports and checkpoints}.
StageResult run_ensemble(const ExperimentConfig& config,
                         const EnsembleOptions& options = {});

/// Collates every evaluated run into benchmarks.csv/.txt and a
/// plot_<name>.csv per run.
StageResult report(const ExperimentConfig& config);

/// A trainable variant decoded from its name, e.g. "sent-bi-gru" or
/// "teni-gru-1": optional exogenous prefix, optional "bi-", the cell, and
/// an optional horizon suffix.
struct ModelVariant {
    std::string name;
    std::vector<std::string> features;
    Cell cell = Cell::Gru;
    bool bidirectional = false;
    int horizon = 0; // 0 means: use the config horizon
};

ModelVariant parse_model_name(const std::string& name, const ExperimentConfig& config);

} // namespace oilcast::pipeline
