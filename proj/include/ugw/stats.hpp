#pragma once

// Small estimators for Monte Carlo output, including heavy-tail diagnostics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "ugw/rng.hpp"

namespace ugw::stats {

inline double mean(std::span<const double> x) {
    if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double standard_error(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

/// Nonparametric bootstrap standard error of the mean.
inline double bootstrap_stderr(std::span<const double> x, std::uint64_t seed, int replicates = 100) {
    if (x.size() < 2) return 0.0;
    std::vector<double> means(static_cast<std::size_t>(replicates));
    for (int b = 0; b < replicates; ++b) {
        auto rng = Stream::keyed(seed, StreamTag::Bootstrap, 0, static_cast<std::uint32_t>(b));
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += x[rng.below(x.size())];
        means[static_cast<std::size_t>(b)] = acc / static_cast<double>(x.size());
    }
    const double m = mean(means);
    double ss = 0.0;
    for (double v : means) ss += (v - m) * (v - m);
    return std::sqrt(ss / (replicates - 1));
}

/// Linear-interpolated quantile of unsorted data.
inline double quantile(std::vector<double> x, double p) {
    if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(x.begin(), x.end());
    const double pos = p * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, x.size() - 1);
    const double w = pos - static_cast<double>(lo);
    if (w == 0.0) return x[lo];
    return x[lo] * (1.0 - w) + x[hi] * w;
}

/// Median of the means of `batches` contiguous batches.
inline double median_of_means(std::span<const double> x, std::size_t batches) {
    batches = std::max<std::size_t>(1, std::min(batches, x.size()));
    std::vector<double> means;
    means.reserve(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        const std::size_t begin = b * x.size() / batches;
        const std::size_t end = (b + 1) * x.size() / batches;
        means.push_back(mean(x.subspan(begin, end - begin)));
    }
    return quantile(std::move(means), 0.5);
}

/// Maxima of `batches` contiguous batches.
inline std::vector<double> batch_maxima(std::span<const double> x, std::size_t batches) {
    batches = std::max<std::size_t>(1, std::min(batches, x.size()));
    std::vector<double> out;
    for (std::size_t b = 0; b < batches; ++b) {
        const std::size_t begin = b * x.size() / batches;
        const std::size_t end = (b + 1) * x.size() / batches;
        out.push_back(*std::max_element(x.begin() + static_cast<std::ptrdiff_t>(begin),
                                        x.begin() + static_cast<std::ptrdiff_t>(end)));
    }
    return out;
}

/// Share of the total carried by the largest `fraction` of nonnegative values.
inline double top_share(std::vector<double> x, double fraction) {
    if (x.empty()) return 0.0;
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * x.size())));
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k - 1), x.end(),
                     std::greater<>());
    const double top = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    return total > 0.0 ? top / total : 0.0;
}

/// Hill estimate of the tail index from the k largest positive values.
/// Small values (below ~1) indicate an infinite mean.
inline double hill_tail_index(std::vector<double> x, std::size_t k) {
    std::erase_if(x, [](double v) { return !(v > 0.0) || !std::isfinite(v); });
    if (x.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    k = std::min(k, x.size() - 1);
    std::sort(x.begin(), x.end(), std::greater<>());
    const double anchor = std::log(x[k]);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(x[i]) - anchor;
    if (acc <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(k) / acc;
}

}  // namespace ugw::stats
