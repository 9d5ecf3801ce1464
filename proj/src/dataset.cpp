#include "oilcast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "oilcast/csv.hpp"
#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool is_missing(double v) { return std::isnan(v); }

} // namespace

std::size_t TimeSeries::known_count() const {
    std::size_t n = 0;
    for (const auto& p : points)
        if (p.value) ++n;
    return n;
}

TimeSeries ingest_csv(const std::string& path, const std::string& date_column,
                      const std::string& value_column,
                      const std::string& series_name) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw IngestError(path + ": file is empty, expected a header row");
    const auto header = csv::split_line(line);

    auto find_col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw IngestError(path + ": no column named '" + name + "' in header");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_idx = find_col(date_column);
    const std::size_t value_idx = find_col(value_column);

    TimeSeries series;
    series.name = series_name.empty() ? value_column : series_name;

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = csv::split_line(line);
        if (cells.size() <= std::max(date_idx, value_idx))
            throw IngestError(path + " row " + std::to_string(row) +
                              ": fewer cells than the header");
        Date date;
        try {
            date = Date::parse(cells[date_idx]);
        } catch (const IngestError& e) {
            throw IngestError(path + " row " + std::to_string(row) + ": " + e.what());
        }
        const auto value = csv::parse_cell(
            cells[value_idx], path + " row " + std::to_string(row));
        series.points.push_back({date, value});
    }

    std::stable_sort(series.points.begin(), series.points.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });

    std::vector<TimeSeries::Point> dedup;
    for (const auto& p : series.points) {
        if (!dedup.empty() && dedup.back().date == p.date) {
            auto& prev = dedup.back();
            if (prev.value && p.value && *prev.value != *p.value)
                throw IngestError(path + ": duplicate date " + p.date.to_string() +
                                  " with conflicting values");
            if (!prev.value) prev.value = p.value;
            continue;
        }
        dedup.push_back(p);
    }
    series.points = std::move(dedup);

    if (series.known_count() < 2)
        throw IngestError(path + ": series '" + series.name +
                          "' has fewer than 2 known values");
    return series;
}

bool AlignedDataset::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return true;
    return false;
}

const AlignedDataset::Column& AlignedDataset::column(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return c;
    throw ContractError("dataset has no column named '" + name + "'");
}

AlignedDataset::Column& AlignedDataset::column(const std::string& name) {
    for (auto& c : columns)
        if (c.name == name) return c;
    throw ContractError("dataset has no column named '" + name + "'");
}

const AlignedDataset::Column& AlignedDataset::target() const {
    for (const auto& c : columns)
        if (c.role == ColumnRole::Target) return c;
    throw ContractError("dataset has no target column");
}

std::size_t AlignedDataset::missing_count() const {
    std::size_t n = 0;
    for (const auto& c : columns)
        for (double v : c.values)
            if (is_missing(v)) ++n;
    return n;
}

AlignedDataset left_join(const TimeSeries& target,
                         const std::vector<TimeSeries>& others) {
    if (target.known_count() != target.points.size())
        throw ContractError("left_join: target series '" + target.name +
                            "' contains missing values");

    AlignedDataset out;
    out.dates.reserve(target.points.size());
    AlignedDataset::Column target_col{target.name, ColumnRole::Target, {}};
    for (const auto& p : target.points) {
        out.dates.push_back(p.date);
        target_col.values.push_back(*p.value);
    }
    out.columns.push_back(std::move(target_col));

    for (const auto& series : others) {
        AlignedDataset::Column col{series.name, ColumnRole::Exogenous, {}};
        col.values.assign(out.dates.size(), kMissing);
        std::size_t cursor = 0;
        for (const auto& p : series.points) {
            while (cursor < out.dates.size() && out.dates[cursor] < p.date) ++cursor;
            if (cursor == out.dates.size()) break;
            if (out.dates[cursor] == p.date && p.value) col.values[cursor] = *p.value;
        }
        out.columns.push_back(std::move(col));
    }
    return out;
}

AlignedDataset interpolate(const AlignedDataset& dataset) {
    AlignedDataset out = dataset;
    for (auto& col : out.columns) {
        std::vector<std::size_t> known;
        for (std::size_t i = 0; i < col.values.size(); ++i)
            if (!is_missing(col.values[i])) known.push_back(i);
        if (known.empty())
            throw PrepError("column '" + col.name + "' is entirely missing");
        if (known.size() < 2)
            throw PrepError("column '" + col.name +
                            "' has fewer than 2 known values to interpolate from");

        for (std::size_t i = 0; i < known.front(); ++i)
            col.values[i] = col.values[known.front()];
        for (std::size_t i = known.back() + 1; i < col.values.size(); ++i)
            col.values[i] = col.values[known.back()];
        for (std::size_t k = 0; k + 1 < known.size(); ++k) {
            const std::size_t lo = known[k];
            const std::size_t hi = known[k + 1];
            const double vlo = col.values[lo];
            const double vhi = col.values[hi];
            for (std::size_t i = lo + 1; i < hi; ++i) {
                const double t = static_cast<double>(i - lo) /
                                 static_cast<double>(hi - lo);
                col.values[i] = vlo + (vhi - vlo) * t;
            }
        }
    }
    return out;
}

namespace {

// Average ranks, 1-based, ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return a < b;
    });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

bool is_constant(std::span<const double> x) {
    for (double v : x)
        if (v != x[0]) return false;
    return true;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ContractError("spearman: vector lengths differ");
    if (x.size() < 3)
        throw ContractError("spearman: need at least 3 observations");
    if (is_constant(x) || is_constant(y))
        throw ContractError("spearman: correlation is undefined for a constant vector");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

std::vector<FeatureCorrelation> feature_correlations(
    const AlignedDataset& candidates, double threshold) {
    const auto& target = candidates.target();
    std::vector<FeatureCorrelation> out;
    for (const auto& col : candidates.columns) {
        if (col.role != ColumnRole::Exogenous) continue;
        const double rho = spearman(col.values, target.values);
        out.push_back({col.name, rho, std::abs(rho) >= threshold});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.rho) != std::abs(b.rho)) return std::abs(a.rho) > std::abs(b.rho);
        return a.name < b.name;
    });
    return out;
}

std::vector<std::string> select_features(const AlignedDataset& candidates,
                                         double threshold) {
    std::vector<std::string> out;
    for (const auto& fc : feature_correlations(candidates, threshold))
        if (fc.selected) out.push_back(fc.name);
    return out;
}

SplitIndices split_indices(const std::vector<Date>& dates, const SplitSpec& split) {
    if (dates.empty()) throw ContractError("split_indices: no dates");
    if (!(split.train_end < split.valid_end))
        throw ContractError("split: train_end " + split.train_end.to_string() +
                            " must precede valid_end " + split.valid_end.to_string());
    if (!(split.valid_end < dates.back()))
        throw ContractError("split: valid_end " + split.valid_end.to_string() +
                            " must precede the last dataset date " +
                            dates.back().to_string());
    const auto train_it =
        std::upper_bound(dates.begin(), dates.end(), split.train_end);
    const auto valid_it =
        std::upper_bound(dates.begin(), dates.end(), split.valid_end);
    return {static_cast<std::size_t>(train_it - dates.begin()),
            static_cast<std::size_t>(valid_it - dates.begin()), dates.size()};
}

Scaler::Scaler(std::vector<std::string> names, std::vector<double> means,
               std::vector<double> stds)
    : names_(std::move(names)), means_(std::move(means)), stds_(std::move(stds)) {
    if (names_.size() != means_.size() || names_.size() != stds_.size())
        throw ContractError("scaler: mismatched parameter lengths");
    for (double s : stds_)
        if (!(s > 0.0)) throw ContractError("scaler: std must be positive");
}

std::size_t Scaler::index(const std::string& column) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == column) return i;
    throw ContractError("scaler has no column named '" + column + "'");
}

bool Scaler::has_column(const std::string& column) const {
    return std::find(names_.begin(), names_.end(), column) != names_.end();
}

double Scaler::mean(const std::string& column) const { return means_[index(column)]; }
double Scaler::std(const std::string& column) const { return stds_[index(column)]; }

double Scaler::transform_value(const std::string& column, double v) const {
    const std::size_t i = index(column);
    return (v - means_[i]) / stds_[i];
}

double Scaler::inverse_value(const std::string& column, double v) const {
    const std::size_t i = index(column);
    return v * stds_[i] + means_[i];
}

std::vector<double> Scaler::transform(const std::string& column,
                                      std::span<const double> v) const {
    const std::size_t i = index(column);
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = (v[k] - means_[i]) / stds_[i];
    return out;
}

std::vector<double> Scaler::inverse(const std::string& column,
                                    std::span<const double> v) const {
    const std::size_t i = index(column);
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] * stds_[i] + means_[i];
    return out;
}

AlignedDataset Scaler::transform(const AlignedDataset& dataset) const {
    AlignedDataset out = dataset;
    for (auto& col : out.columns) {
        const std::size_t i = index(col.name);
        for (double& v : col.values) v = (v - means_[i]) / stds_[i];
    }
    return out;
}

Scaler fit_scaler(const AlignedDataset& dataset, const SplitSpec& split) {
    const auto idx = split_indices(dataset.dates, split);
    if (idx.train_end == 0) throw PrepError("fit_scaler: training slice is empty");

    std::vector<std::string> names;
    std::vector<double> means, stds;
    for (const auto& col : dataset.columns) {
        double mean = 0.0;
        for (std::size_t i = 0; i < idx.train_end; ++i) {
            if (is_missing(col.values[i]))
                throw PrepError("fit_scaler: column '" + col.name +
                                "' still has missing values; interpolate first");
            mean += col.values[i];
        }
        mean /= static_cast<double>(idx.train_end);
        double var = 0.0;
        for (std::size_t i = 0; i < idx.train_end; ++i) {
            const double d = col.values[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(idx.train_end);
        const double sd = std::sqrt(var);
        if (!(sd > 0.0))
            throw PrepError("fit_scaler: column '" + col.name +
                            "' is constant on the training slice");
        names.push_back(col.name);
        means.push_back(mean);
        stds.push_back(sd);
    }
    return Scaler(std::move(names), std::move(means), std::move(stds));
}

WindowedSplits make_windows(const AlignedDataset& dataset,
                            const std::vector<std::string>& features,
                            int window, int horizon, const SplitSpec& split,
                            const std::string& target_column) {
    if (window < 1) throw ParamError("make_windows: window must be >= 1");
    if (horizon < 1) throw ParamError("make_windows: horizon must be >= 1");
    if (features.empty()) throw ContractError("make_windows: no feature columns");

    std::vector<const AlignedDataset::Column*> cols;
    for (const auto& name : features) cols.push_back(&dataset.column(name));
    const auto& target =
        target_column.empty() ? dataset.target() : dataset.column(target_column);

    for (const auto* col : cols)
        for (double v : col->values)
            if (is_missing(v))
                throw PrepError("make_windows: column '" + col->name +
                                "' still has missing values");

    const auto idx = split_indices(dataset.dates, split);
    const int need = window + horizon;

    auto window_range = [&](std::size_t begin, std::size_t end, const char* label) {
        std::vector<WindowedSample> out;
        const std::size_t n = end - begin;
        if (n < static_cast<std::size_t>(need))
            throw PrepError(std::string("make_windows: ") + label + " split has " +
                            std::to_string(n) + " rows; window + horizon requires at least " +
                            std::to_string(need));
        const std::size_t count = n - static_cast<std::size_t>(need) + 1;
        out.reserve(count);
        for (std::size_t s = 0; s < count; ++s) {
            WindowedSample sample;
            sample.inputs = Array2(window, static_cast<int>(cols.size()));
            for (int r = 0; r < window; ++r)
                for (std::size_t f = 0; f < cols.size(); ++f)
                    sample.inputs.at(r, static_cast<int>(f)) =
                        cols[f]->values[begin + s + static_cast<std::size_t>(r)];
            const std::size_t anchor = begin + s + static_cast<std::size_t>(window) - 1;
            sample.anchor_date = dataset.dates[anchor];
            sample.targets.resize(static_cast<std::size_t>(horizon));
            for (int h = 0; h < horizon; ++h)
                sample.targets[static_cast<std::size_t>(h)] =
                    target.values[anchor + 1 + static_cast<std::size_t>(h)];
            out.push_back(std::move(sample));
        }
        return out;
    };

    WindowedSplits out;
    out.train = window_range(0, idx.train_end, "train");
    out.valid = window_range(idx.train_end, idx.valid_end, "valid");
    out.test = window_range(idx.valid_end, idx.total, "test");
    return out;
}

} // namespace oilcast
