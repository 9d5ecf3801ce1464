#pragma once

#include <array>
#include <string>
#include <vector>

#include "oilcast/dataset.hpp"
#include "oilcast/evaluation.hpp"
#include "oilcast/models.hpp"
#include "oilcast/training.hpp"

namespace oilcast {

/// What scenario 2 is trained to predict. The fusion formula subtracts its
/// forecast either way; "Price" keeps all three forecasts in one unit.
enum class Scenario2Target { Price, Residual };

/// One of the three forecasting scenarios. Input columns are fixed by id:
///   1: price + sentiment, 2: residual + sentiment, 3: price + residual.
struct ScenarioSpec {
    int id = 1;
    std::vector<std::string> input_columns;
    ModelSpec model;
};

/// Builds the scenario with the canonical input columns for `id`, deriving
/// the model seed from `base.seed` and the scenario id.
ScenarioSpec make_scenario(int id, const ModelSpec& base,
                           const std::string& price_column = "brent",
                           const std::string& sentiment_column = "sent",
                           const std::string& residual_column = "residual");

/// The three scenario forecasts for one split, aligned by anchor date,
/// in scaled space. All three share one shape.
struct ForecastSet {
    Array2 forecast_1;
    Array2 forecast_2;
    Array2 forecast_3;
    std::vector<Date> anchors;

    void validate() const;
};

struct EnsembleWeights {
    double w1 = 0.0;
    double w2 = 0.0;
    double w3 = 1.0;
};

/// Everything the weight search and final evaluation need: per-split
/// forecasts, the matching scaled targets, and the per-scenario reports.
struct ScenarioRuns {
    ForecastSet valid;
    ForecastSet test;
    Array2 valid_targets; // scaled, aligned with `valid`
    Array2 test_targets;
    std::array<TrainReport, 3> reports;
    std::array<ParameterSet, 3> params;
};

/// Trains the three scenarios independently (optionally on three threads;
/// results are identical either way) and collects forecasts on the
/// validation and test splits.
ScenarioRuns run_scenarios(const AlignedDataset& scaled,
                           const std::array<ScenarioSpec, 3>& specs,
                           const SplitSpec& split, const TrainConfig& config,
                           int window, Scenario2Target s2_target,
                           bool parallel = false,
                           const std::string& target_column = "brent",
                           const std::string& residual_column = "residual");

/// The fusion formula, applied elementwise exactly as written:
///   final = (forecast_3 - forecast_2 * w1) * w2 + forecast_1 * w3
Array2 fuse(const ForecastSet& forecasts, const EnsembleWeights& weights);

struct WeightSearchResult {
    EnsembleWeights weights;
    double valid_mse = 0.0; // original price units
    long evaluations = 0;
};

/// Exhaustive grid over [0, 2]^3 at `grid_step`, minimizing validation MSE
/// in original price space; ties keep the lexicographically smallest
/// (w1, w2, w3). The (0, 0, 1) fallback is always considered, so the result
/// is never worse than forecast_1 alone.
WeightSearchResult search_weights(const ForecastSet& valid_forecasts,
                                  const Array2& valid_targets_scaled,
                                  const Scaler& scaler,
                                  const std::string& target_column,
                                  double grid_step);

/// Fuses, inverse-transforms to price space, and scores.
Metrics evaluate_ensemble(const ForecastSet& test_forecasts,
                          const EnsembleWeights& weights, const Scaler& scaler,
                          const std::string& target_column,
                          const Array2& test_targets_scaled);

} // namespace oilcast
