#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dcp/error.hpp"

namespace dcp {

// One input's predictive draws together with the order statistics every score
// family keeps reusing. Immutable after construction.
struct DrawVector {
    std::vector<double> draws;         // original order
    std::vector<double> sorted_draws;  // ascending copy
    double mean = 0.0;
    double std_dev = 0.0;  // population (divide-by-M)
    double median = 0.0;   // midpoint of the central pair when M is even

    std::size_t size() const { return draws.size(); }
};

inline double median_of_sorted(std::span<const double> sorted) {
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

inline DrawVector summarize_draws(std::vector<double> draws) {
    if (draws.empty()) raise(Errc::EmptyDraws, "draw vector must hold at least one value");
    for (double d : draws) {
        if (!std::isfinite(d)) raise(Errc::NonFinite, "draw vector contains a non-finite value");
    }

    DrawVector dv;
    dv.draws = std::move(draws);
    dv.sorted_draws = dv.draws;
    std::sort(dv.sorted_draws.begin(), dv.sorted_draws.end());

    // Accumulate over the sorted copy so the statistics are bit-identical for
    // any permutation of the same draws.
    const double m = static_cast<double>(dv.draws.size());
    double sum = 0.0;
    for (double d : dv.sorted_draws) sum += d;
    dv.mean = sum / m;

    double ss = 0.0;
    for (double d : dv.sorted_draws) {
        const double e = d - dv.mean;
        ss += e * e;
    }
    dv.std_dev = std::sqrt(ss / m);
    dv.median = median_of_sorted(dv.sorted_draws);
    return dv;
}

inline DrawVector summarize_draws(std::span<const double> draws) {
    return summarize_draws(std::vector<double>(draws.begin(), draws.end()));
}

}  // namespace dcp
