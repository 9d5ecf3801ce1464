#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oilcast/array.hpp"
#include "oilcast/date.hpp"

namespace oilcast {

/// A dated univariate sequence with optional gaps; the atom of ingestion.
/// Dates are strictly increasing after construction.
struct TimeSeries {
    struct Point {
        Date date;
        std::optional<double> value;
    };

    std::string name;
    std::vector<Point> points;

    std::size_t known_count() const;
};

/// Reads one series from a CSV file: header row, ISO dates, empty value
/// cell = missing. Rows are sorted and exact-duplicate rows deduplicated;
/// two rows sharing a date with different values are an ingestion error.
TimeSeries ingest_csv(const std::string& path, const std::string& date_column,
                      const std::string& value_column,
                      const std::string& series_name = "");

enum class ColumnRole { Target, Exogenous, Derived };

/// Date-indexed matrix of the target plus exogenous/derived columns.
/// Missing cells are NaN while preparation is in flight; a prepared
/// dataset has none.
struct AlignedDataset {
    struct Column {
        std::string name;
        ColumnRole role;
        std::vector<double> values; // NaN marks a missing cell
    };

    std::vector<Date> dates;
    std::vector<Column> columns;

    std::size_t size() const { return dates.size(); }
    bool has_column(const std::string& name) const;
    const Column& column(const std::string& name) const;
    Column& column(const std::string& name);
    const Column& target() const;
    std::size_t missing_count() const;
};

/// Left join of `others` onto the target's dates. Output dates equal the
/// target's; cells are missing where a series lacks that date. The target
/// must be gap-free.
AlignedDataset left_join(const TimeSeries& target,
                         const std::vector<TimeSeries>& others);

/// Fills interior gaps by linear interpolation between the nearest known
/// neighbors and leading/trailing gaps with the nearest known value.
/// Single-step gaps reduce to the midpoint of the two neighbors.
AlignedDataset interpolate(const AlignedDataset& dataset);

/// Spearman rank correlation with average ranks for ties.
/// Requires equal lengths >= 3 and non-constant inputs.
double spearman(std::span<const double> x, std::span<const double> y);

struct FeatureCorrelation {
    std::string name;
    double rho;
    bool selected;
};

/// Exogenous columns whose |spearman(column, target)| >= threshold,
/// strongest first.
std::vector<std::string> select_features(const AlignedDataset& candidates,
                                         double threshold);

/// Correlation of every exogenous column against the target, strongest
/// first, with the threshold verdict attached (the audit view of
/// select_features).
std::vector<FeatureCorrelation> feature_correlations(
    const AlignedDataset& candidates, double threshold);

/// Date-driven split boundaries, inclusive: train ends at train_end,
/// validation at valid_end, test runs to the last row.
struct SplitSpec {
    Date train_end;
    Date valid_end;
};

struct SplitIndices {
    std::size_t train_end;  // rows [0, train_end) are training
    std::size_t valid_end;  // rows [train_end, valid_end) are validation
    std::size_t total;      // rows [valid_end, total) are test
};

SplitIndices split_indices(const std::vector<Date>& dates, const SplitSpec& split);

/// Per-column standardization parameters (population std, divide by N),
/// fitted on training rows only so later splits never leak into them.
class Scaler {
public:
    Scaler() = default;
    Scaler(std::vector<std::string> names, std::vector<double> means,
           std::vector<double> stds);

    double transform_value(const std::string& column, double v) const;
    double inverse_value(const std::string& column, double v) const;
    std::vector<double> transform(const std::string& column,
                                  std::span<const double> v) const;
    std::vector<double> inverse(const std::string& column,
                                std::span<const double> v) const;
    AlignedDataset transform(const AlignedDataset& dataset) const;

    bool has_column(const std::string& column) const;
    double mean(const std::string& column) const;
    double std(const std::string& column) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::size_t index(const std::string& column) const;

    std::vector<std::string> names_;
    std::vector<double> means_;
    std::vector<double> stds_;
};

/// Mean/std per column over the training slice only. Constant training
/// columns are a preparation error.
Scaler fit_scaler(const AlignedDataset& dataset, const SplitSpec& split);

/// One supervised example: `window` consecutive rows of the selected
/// feature columns, paired with the next `horizon` values of the target
/// column. Inputs and targets always lie inside one split.
struct WindowedSample {
    Array2 inputs;               // window x features
    std::vector<double> targets; // horizon values
    Date anchor_date;            // date of the last input row
};

struct WindowedSplits {
    std::vector<WindowedSample> train;
    std::vector<WindowedSample> valid;
    std::vector<WindowedSample> test;
};

/// Windows each split independently; a split of length N yields
/// N - window - horizon + 1 samples. `target_column` defaults to the
/// dataset's target role column.
WindowedSplits make_windows(const AlignedDataset& dataset,
                            const std::vector<std::string>& features,
                            int window, int horizon, const SplitSpec& split,
                            const std::string& target_column = "");

} // namespace oilcast
