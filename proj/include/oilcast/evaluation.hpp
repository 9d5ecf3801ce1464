#pragma once

#include <span>
#include <string>
#include <vector>

#include "oilcast/array.hpp"
#include "oilcast/date.hpp"

namespace oilcast {

/// Error metrics in original price units. Multi-step runs pool every
/// horizon step into one error population.
struct Metrics {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    std::size_t n = 0;
    int horizon = 1;
};

Metrics metrics(std::span<const double> actual, std::span<const double> predicted,
                int horizon = 1);
Metrics metrics(const Array2& actual, const Array2& predicted);

/// Per-horizon-step breakdown (diagnostic companion to the pooled view).
std::vector<Metrics> per_step_metrics(const Array2& actual, const Array2& predicted);

struct SplitSignature {
    Date train_end;
    Date valid_end;
    std::size_t test_samples = 0;

    bool operator==(const SplitSignature&) const = default;
};

struct BenchmarkRow {
    std::string model;
    int horizon = 1;
    Metrics metrics;
    std::string config_digest;
    SplitSignature split;
};

/// Validates that every run shares one split signature and returns the rows
/// sorted by MAE ascending (ties by model name).
std::vector<BenchmarkRow> benchmark(std::vector<BenchmarkRow> rows);

/// Fixed-width text table: Model, Horizon, MAE, MSE, RMSE.
std::string render_benchmark_table(const std::vector<BenchmarkRow>& rows);

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);

} // namespace oilcast
