#include "oilcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "oilcast/csv.hpp"
#include "oilcast/errors.hpp"

namespace oilcast {

Metrics metrics(std::span<const double> actual, std::span<const double> predicted,
                int horizon) {
    if (actual.empty()) throw ContractError("metrics: empty input");
    if (actual.size() != predicted.size())
        throw ShapeError("metrics: " + std::to_string(actual.size()) + " actuals vs " +
                         std::to_string(predicted.size()) + " predictions");
    double abs_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    Metrics m;
    m.n = actual.size();
    m.horizon = horizon;
    m.mae = abs_sum / static_cast<double>(m.n);
    m.mse = sq_sum / static_cast<double>(m.n);
    m.rmse = std::sqrt(m.mse);
    return m;
}

Metrics metrics(const Array2& actual, const Array2& predicted) {
    if (!actual.same_shape(predicted))
        throw ShapeError("metrics: actual " + actual.shape_str() + " vs predicted " +
                         predicted.shape_str());
    return metrics(std::span<const double>(actual.data),
                   std::span<const double>(predicted.data), actual.cols);
}

std::vector<Metrics> per_step_metrics(const Array2& actual, const Array2& predicted) {
    if (!actual.same_shape(predicted))
        throw ShapeError("per_step_metrics: actual " + actual.shape_str() +
                         " vs predicted " + predicted.shape_str());
    std::vector<Metrics> out;
    for (int c = 0; c < actual.cols; ++c) {
        std::vector<double> a, p;
        a.reserve(static_cast<std::size_t>(actual.rows));
        p.reserve(static_cast<std::size_t>(actual.rows));
        for (int r = 0; r < actual.rows; ++r) {
            a.push_back(actual.at(r, c));
            p.push_back(predicted.at(r, c));
        }
        out.push_back(metrics(a, p, 1));
    }
    return out;
}

std::vector<BenchmarkRow> benchmark(std::vector<BenchmarkRow> rows) {
    if (rows.empty()) throw ContractError("benchmark: no runs to compare");
    for (const auto& row : rows)
        if (!(row.split == rows.front().split))
            throw ComparisonError(
                "benchmark: run '" + row.model + "' used splits " +
                row.split.train_end.to_string() + "/" + row.split.valid_end.to_string() +
                " with " + std::to_string(row.split.test_samples) +
                " test samples, but '" + rows.front().model + "' used " +
                rows.front().split.train_end.to_string() + "/" +
                rows.front().split.valid_end.to_string() + " with " +
                std::to_string(rows.front().split.test_samples));
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.metrics.mae != b.metrics.mae) return a.metrics.mae < b.metrics.mae;
        return a.model < b.model;
    });
    return rows;
}

std::string render_benchmark_table(const std::vector<BenchmarkRow>& rows) {
    std::size_t name_width = 5;
    for (const auto& row : rows) name_width = std::max(name_width, row.model.size());

    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-*s  %7s  %10s  %10s  %10s\n",
                  static_cast<int>(name_width), "Model", "Horizon", "MAE", "MSE",
                  "RMSE");
    out << line;
    out << std::string(name_width + 2 + 7 + 2 + 10 + 2 + 10 + 2 + 10, '-') << '\n';
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%-*s  %7d  %10.5f  %10.5f  %10.5f\n",
                      static_cast<int>(name_width), row.model.c_str(), row.horizon,
                      row.metrics.mae, row.metrics.mse, row.metrics.rmse);
        out << line;
    }
    return out.str();
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
    std::ostringstream out;
    out << "model,horizon,mae,mse,rmse,n,config_digest\n";
    for (const auto& row : rows)
        out << row.model << ',' << row.horizon << ',' << csv::format_double(row.metrics.mae)
            << ',' << csv::format_double(row.metrics.mse) << ','
            << csv::format_double(row.metrics.rmse) << ',' << row.metrics.n << ','
            << row.config_digest << '\n';
    return out.str();
}

} // namespace oilcast
