#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oilcast/array.hpp"
#include "oilcast/dataset.hpp"
#include "oilcast/models.hpp"
#include "oilcast/rng.hpp"
#include "oilcast/tape.hpp"

namespace testsupport {

/// Central finite differences d(loss)/d(theta) for every parameter element.
/// Only forward evaluations of `loss_fn` are used, so this stays independent
/// of the tape's backward pass.
inline oilcast::GradMap finite_difference(
    const oilcast::ParameterSet& params,
    const std::function<double(const oilcast::ParameterSet&)>& loss_fn,
    double step = 1e-5) {
    oilcast::GradMap grads;
    oilcast::ParameterSet probe = params;
    for (auto& [name, arr] : probe) {
        oilcast::Array2 g(arr.rows, arr.cols);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const double saved = arr.data[i];
            arr.data[i] = saved + step;
            const double up = loss_fn(probe);
            arr.data[i] = saved - step;
            const double down = loss_fn(probe);
            arr.data[i] = saved;
            g.data[i] = (up - down) / (2.0 * step);
        }
        grads.emplace(name, std::move(g));
    }
    return grads;
}

/// Max elementwise |got - want| / max(|want|, floor). The floor keeps
/// finite-difference noise on near-zero gradients from dominating.
inline double max_rel_error(const oilcast::GradMap& got, const oilcast::GradMap& want,
                            double floor = 1e-3) {
    double worst = 0.0;
    for (const auto& [name, w] : want) {
        const auto it = got.find(name);
        if (it == got.end()) return std::numeric_limits<double>::infinity();
        const oilcast::Array2& g = it->second;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double denom = std::max(std::abs(w.data[i]), floor);
            worst = std::max(worst, std::abs(g.data[i] - w.data[i]) / denom);
        }
    }
    return worst;
}

inline oilcast::Array2 random_array(oilcast::Rng& rng, int rows, int cols,
                                    double lo = -1.0, double hi = 1.0) {
    oilcast::Array2 out(rows, cols);
    for (double& v : out.data) v = rng.uniform(lo, hi);
    return out;
}

inline std::vector<double> noisy_sine(std::size_t n, double period, double noise_sd,
                                      std::uint64_t seed) {
    oilcast::Rng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / period) +
                 noise_sd * rng.next_gaussian();
    return out;
}

inline std::vector<oilcast::Date> consecutive_dates(std::size_t n,
                                                    std::int64_t start_serial = 15340) {
    std::vector<oilcast::Date> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(start_serial + static_cast<std::int64_t>(i));
    return out;
}

inline oilcast::AlignedDataset make_dataset(
    const std::vector<oilcast::Date>& dates,
    const std::vector<std::pair<std::string, std::vector<double>>>& columns,
    const std::string& target_name) {
    oilcast::AlignedDataset out;
    out.dates = dates;
    for (const auto& [name, values] : columns)
        out.columns.push_back({name,
                               name == target_name ? oilcast::ColumnRole::Target
                                                   : oilcast::ColumnRole::Exogenous,
                               values});
    return out;
}

/// Brute-force Spearman: counting-based average ranks, then a naive Pearson
/// with separate accumulation passes. Shares no code with the library path.
inline double spearman_oracle(const std::vector<double>& x,
                              const std::vector<double>& y) {
    const std::size_t n = x.size();
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t less = 0, equal = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j] < v[i]) ++less;
                if (v[j] == v[i]) ++equal;
            }
            r[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx += rx[i];
    for (std::size_t i = 0; i < n; ++i) my += ry[i];
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += (rx[i] - mx) * (ry[i] - my);
    double dx = 0.0;
    for (std::size_t i = 0; i < n; ++i) dx += (rx[i] - mx) * (rx[i] - mx);
    double dy = 0.0;
    for (std::size_t i = 0; i < n; ++i) dy += (ry[i] - my) * (ry[i] - my);
    return num / (std::sqrt(dx) * std::sqrt(dy));
}

} // namespace testsupport
