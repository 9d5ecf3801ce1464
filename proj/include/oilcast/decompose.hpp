#pragma once

#include <span>
#include <vector>

namespace oilcast {

enum class TrendMode {
    /// Moving average over [t-k, t+k] clipped to the series, k = (window-1)/2.
    /// Looks up to k steps ahead, so the residual feature carries a known
    /// k-day look-ahead.
    Centered,
    /// Moving average over [t-window+1, t] clipped to the series; leak-free.
    Trailing,
};

/// Trend/residual split of a series. The residual is the series minus the
/// trend, so trend + residual reconstructs the input.
struct Decomposition {
    std::vector<double> trend;
    std::vector<double> residual;
    int window = 0;
    TrendMode mode = TrendMode::Centered;
};

/// Centered mode requires an odd ma_window with 3 <= ma_window <= N;
/// trailing mode requires 1 <= ma_window <= N. The averaging window
/// shrinks at the edges instead of padding.
Decomposition decompose(std::span<const double> series, int ma_window,
                        TrendMode mode = TrendMode::Centered);

} // namespace oilcast
