#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "dcp/draws.hpp"
#include "dcp/error.hpp"

namespace dcp {

// Uncalibrated inner band extracted from a draw vector; interval-violation
// scores measure how far a candidate lies outside it.
struct BaseBand {
    double low = 0.0;
    double up = 0.0;

    double width() const { return up - low; }
};

// Empirical quantile with linear interpolation between the two closest order
// statistics (position p*(M-1), the common "linear" convention).
inline double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) raise(Errc::EmptyDraws, "quantile of an empty sample");
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= n - 1) return sorted[n - 1];
    const double frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

// Central band [Q(a/2), Q(1-a/2)] of the draws.
inline BaseBand quantile_band(const DrawVector& dv, double band_alpha) {
    if (dv.draws.empty()) raise(Errc::EmptyDraws, "quantile band of an empty draw vector");
    const double lo = empirical_quantile(dv.sorted_draws, band_alpha / 2.0);
    const double hi = empirical_quantile(dv.sorted_draws, 1.0 - band_alpha / 2.0);
    return BaseBand{lo, hi};
}

// Narrowest window of m = ceil((1-band_alpha)*M) consecutive order statistics;
// ties pick the leftmost window.
inline BaseBand hdi_band(const DrawVector& dv, double band_alpha) {
    const std::size_t n = dv.sorted_draws.size();
    if (n == 0) raise(Errc::EmptyDraws, "hdi band of an empty draw vector");
    auto m = static_cast<std::size_t>(std::ceil((1.0 - band_alpha) * static_cast<double>(n)));
    if (m < 1) m = 1;
    if (m > n) m = n;

    std::size_t best = 0;
    double best_width = dv.sorted_draws[m - 1] - dv.sorted_draws[0];
    for (std::size_t i = 1; i + m <= n; ++i) {
        const double w = dv.sorted_draws[i + m - 1] - dv.sorted_draws[i];
        if (w < best_width) {
            best_width = w;
            best = i;
        }
    }
    return BaseBand{dv.sorted_draws[best], dv.sorted_draws[best + m - 1]};
}

}  // namespace dcp
