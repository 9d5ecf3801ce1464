#include "oilcast/ensemble.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "oilcast/errors.hpp"
#include "oilcast/rng.hpp"

namespace oilcast {

ScenarioSpec make_scenario(int id, const ModelSpec& base,
                           const std::string& price_column,
                           const std::string& sentiment_column,
                           const std::string& residual_column) {
    ScenarioSpec spec;
    spec.id = id;
    switch (id) {
    case 1:
        spec.input_columns = {price_column, sentiment_column};
        break;
    case 2:
        spec.input_columns = {residual_column, sentiment_column};
        break;
    case 3:
        spec.input_columns = {price_column, residual_column};
        break;
    default:
        throw ParamError("scenario id must be 1, 2, or 3");
    }
    spec.model = base;
    spec.model.input_features = 2;
    const std::string stage = "scenario-" + std::to_string(id);
    spec.model.seed = derive_seed(base.seed, stage.c_str());
    return spec;
}

void ForecastSet::validate() const {
    if (!forecast_1.same_shape(forecast_2) || !forecast_1.same_shape(forecast_3))
        throw ShapeError("forecast set: scenario shapes disagree, " +
                         forecast_1.shape_str() + " / " + forecast_2.shape_str() +
                         " / " + forecast_3.shape_str());
    if (static_cast<std::size_t>(forecast_1.rows) != anchors.size())
        throw ShapeError("forecast set: anchor count does not match forecast rows");
}

namespace {

struct ScenarioOutput {
    Array2 valid_pred;
    Array2 test_pred;
    std::vector<Date> valid_anchors;
    std::vector<Date> test_anchors;
    Array2 valid_targets;
    Array2 test_targets;
    TrainReport report;
    ParameterSet params;
};

ScenarioOutput run_one(const AlignedDataset& scaled, const ScenarioSpec& scenario,
                       const SplitSpec& split, TrainConfig config, int window,
                       const std::string& target_column) {
    // Fail fast on missing inputs before any training starts.
    for (const auto& name : scenario.input_columns) scaled.column(name);

    const auto windows = make_windows(scaled, scenario.input_columns, window,
                                      scenario.model.horizon, split, target_column);
    const std::string stage = "scenario-" + std::to_string(scenario.id) + "-shuffle";
    config.seed = derive_seed(config.seed, stage.c_str());

    ScenarioOutput out;
    try {
        TrainResult result = train(scenario.model, windows.train, windows.valid, config);
        out.report = std::move(result.report);
        out.params = std::move(result.params);
    } catch (const TrainError& e) {
        throw TrainError("scenario " + std::to_string(scenario.id) + ": " + e.what());
    }
    out.valid_pred = predict_samples(scenario.model, out.params, windows.valid);
    out.test_pred = predict_samples(scenario.model, out.params, windows.test);
    out.valid_targets = stack_targets(windows.valid);
    out.test_targets = stack_targets(windows.test);
    for (const auto& s : windows.valid) out.valid_anchors.push_back(s.anchor_date);
    for (const auto& s : windows.test) out.test_anchors.push_back(s.anchor_date);
    return out;
}

} // namespace

ScenarioRuns run_scenarios(const AlignedDataset& scaled,
                           const std::array<ScenarioSpec, 3>& specs,
                           const SplitSpec& split, const TrainConfig& config,
                           int window, Scenario2Target s2_target, bool parallel,
                           const std::string& target_column,
                           const std::string& residual_column) {
    for (std::size_t i = 0; i < specs.size(); ++i)
        if (specs[i].id != static_cast<int>(i) + 1)
            throw ContractError("run_scenarios: specs must be ordered 1, 2, 3");

    auto target_for = [&](const ScenarioSpec& s) {
        if (s.id == 2 && s2_target == Scenario2Target::Residual) return residual_column;
        return target_column;
    };

    std::array<ScenarioOutput, 3> outs;
    if (parallel) {
        std::array<std::future<ScenarioOutput>, 3> futures;
        for (std::size_t i = 0; i < 3; ++i)
            futures[i] = std::async(std::launch::async, [&, i] {
                return run_one(scaled, specs[i], split, config, window,
                               target_for(specs[i]));
            });
        for (std::size_t i = 0; i < 3; ++i) outs[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < 3; ++i)
            outs[i] = run_one(scaled, specs[i], split, config, window,
                              target_for(specs[i]));
    }

    for (std::size_t i = 1; i < 3; ++i) {
        if (outs[i].valid_anchors != outs[0].valid_anchors ||
            outs[i].test_anchors != outs[0].test_anchors)
            throw ContractError("run_scenarios: scenario forecasts are not aligned");
    }

    ScenarioRuns runs;
    runs.valid = {std::move(outs[0].valid_pred), std::move(outs[1].valid_pred),
                  std::move(outs[2].valid_pred), std::move(outs[0].valid_anchors)};
    runs.test = {std::move(outs[0].test_pred), std::move(outs[1].test_pred),
                 std::move(outs[2].test_pred), std::move(outs[0].test_anchors)};
    runs.valid.validate();
    runs.test.validate();
    // Price targets come from scenario 1, whose target column is always the price.
    runs.valid_targets = std::move(outs[0].valid_targets);
    runs.test_targets = std::move(outs[0].test_targets);
    for (std::size_t i = 0; i < 3; ++i) {
        runs.reports[i] = std::move(outs[i].report);
        runs.params[i] = std::move(outs[i].params);
    }
    return runs;
}

Array2 fuse(const ForecastSet& forecasts, const EnsembleWeights& weights) {
    forecasts.validate();
    const Array2& f1 = forecasts.forecast_1;
    const Array2& f2 = forecasts.forecast_2;
    const Array2& f3 = forecasts.forecast_3;
    Array2 out(f1.rows, f1.cols);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = (f3.data[i] - f2.data[i] * weights.w1) * weights.w2 +
                      f1.data[i] * weights.w3;
    return out;
}

namespace {

double fused_price_mse(const ForecastSet& fs, double w1, double w2, double w3,
                       const std::vector<double>& price_targets, double sd,
                       double mean) {
    double acc = 0.0;
    const std::size_t n = fs.forecast_1.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double fused = (fs.forecast_3.data[i] - fs.forecast_2.data[i] * w1) * w2 +
                             fs.forecast_1.data[i] * w3;
        const double err = fused * sd + mean - price_targets[i];
        acc += err * err;
    }
    return acc / static_cast<double>(n);
}

} // namespace

WeightSearchResult search_weights(const ForecastSet& valid_forecasts,
                                  const Array2& valid_targets_scaled,
                                  const Scaler& scaler,
                                  const std::string& target_column,
                                  double grid_step) {
    valid_forecasts.validate();
    if (!(grid_step > 0.0 && grid_step <= 1.0))
        throw ContractError("search_weights: grid step must lie in (0, 1]");
    if (valid_forecasts.forecast_1.size() == 0)
        throw ContractError("search_weights: empty validation forecast set");
    if (!valid_forecasts.forecast_1.same_shape(valid_targets_scaled))
        throw ShapeError("search_weights: targets " + valid_targets_scaled.shape_str() +
                         " do not match forecasts " +
                         valid_forecasts.forecast_1.shape_str());

    const double sd = scaler.std(target_column);
    const double mean = scaler.mean(target_column);
    std::vector<double> price_targets(valid_targets_scaled.size());
    for (std::size_t i = 0; i < price_targets.size(); ++i)
        price_targets[i] = valid_targets_scaled.data[i] * sd + mean;

    const int steps = static_cast<int>(std::floor(2.0 / grid_step + 1e-9)) + 1;
    std::vector<double> axis(static_cast<std::size_t>(steps));
    bool axis_has_one = false;
    for (int i = 0; i < steps; ++i) {
        double v = static_cast<double>(i) * grid_step;
        if (std::abs(v - std::round(v)) < 1e-9) v = std::round(v);
        axis[static_cast<std::size_t>(i)] = v;
        if (v == 1.0) axis_has_one = true;
    }

    WeightSearchResult result;
    double best = std::numeric_limits<double>::infinity();
    EnsembleWeights best_w{axis[0], axis[0], axis[0]};
    for (double w1 : axis)
        for (double w2 : axis)
            for (double w3 : axis) {
                const double mse = fused_price_mse(valid_forecasts, w1, w2, w3,
                                                   price_targets, sd, mean);
                ++result.evaluations;
                if (mse < best) {
                    best = mse;
                    best_w = {w1, w2, w3};
                }
            }

    if (!axis_has_one) {
        // Guarantee the forecast_1 fallback even on grids that skip 1.0.
        const double mse =
            fused_price_mse(valid_forecasts, 0.0, 0.0, 1.0, price_targets, sd, mean);
        ++result.evaluations;
        if (mse < best) {
            best = mse;
            best_w = {0.0, 0.0, 1.0};
        }
    }

    result.weights = best_w;
    result.valid_mse = best;
    return result;
}

Metrics evaluate_ensemble(const ForecastSet& test_forecasts,
                          const EnsembleWeights& weights, const Scaler& scaler,
                          const std::string& target_column,
                          const Array2& test_targets_scaled) {
    const Array2 fused = fuse(test_forecasts, weights);
    if (!fused.same_shape(test_targets_scaled))
        throw ShapeError("evaluate_ensemble: targets " + test_targets_scaled.shape_str() +
                         " do not match forecasts " + fused.shape_str());
    const double sd = scaler.std(target_column);
    const double mean = scaler.mean(target_column);
    Array2 actual(fused.rows, fused.cols);
    Array2 predicted(fused.rows, fused.cols);
    for (std::size_t i = 0; i < fused.size(); ++i) {
        actual.data[i] = test_targets_scaled.data[i] * sd + mean;
        predicted.data[i] = fused.data[i] * sd + mean;
    }
    return metrics(actual, predicted);
}

} // namespace oilcast
