#include "oilcast/decompose.hpp"

#include <algorithm>
#include <string>

#include "oilcast/errors.hpp"

namespace oilcast {

Decomposition decompose(std::span<const double> series, int ma_window,
                        TrendMode mode) {
    const int n = static_cast<int>(series.size());
    if (mode == TrendMode::Centered) {
        if (ma_window < 3 || ma_window > n || ma_window % 2 == 0)
            throw ParamError("decompose: centered ma_window must be odd and in [3, " +
                             std::to_string(n) + "], got " + std::to_string(ma_window));
    } else {
        if (ma_window < 1 || ma_window > n)
            throw ParamError("decompose: trailing ma_window must be in [1, " +
                             std::to_string(n) + "], got " + std::to_string(ma_window));
    }

    Decomposition out;
    out.window = ma_window;
    out.mode = mode;
    out.trend.resize(series.size());
    out.residual.resize(series.size());

    const int k = (ma_window - 1) / 2;
    for (int t = 0; t < n; ++t) {
        int lo, hi; // inclusive
        if (mode == TrendMode::Centered) {
            lo = std::max(0, t - k);
            hi = std::min(n - 1, t + k);
        } else {
            lo = std::max(0, t - ma_window + 1);
            hi = t;
        }
        double acc = 0.0;
        for (int i = lo; i <= hi; ++i) acc += series[static_cast<std::size_t>(i)];
        const double trend = acc / static_cast<double>(hi - lo + 1);
        out.trend[static_cast<std::size_t>(t)] = trend;
        out.residual[static_cast<std::size_t>(t)] =
            series[static_cast<std::size_t>(t)] - trend;
    }
    return out;
}

} // namespace oilcast
