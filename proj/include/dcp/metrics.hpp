#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dcp/error.hpp"

namespace dcp {

inline constexpr double kRangeFloor = 1e-12;

// One scored test sample: interval, coverage indicator and the slope-weighted
// miss distance e_i used by the Winkler score.
struct SampleEval {
    double y = 0.0;
    double low = 0.0;
    double up = 0.0;
    bool covered = false;
    double width = 0.0;
    double miss_error = 0.0;  // (2/alpha) * miss distance; zero when covered
};

// Miss penalty with slope 2/alpha per unit distance; zero on and inside the
// interval (the boundary counts as covered).
inline double winkler_error(double y, double low, double up, double alpha) {
    if (y < low) return (2.0 / alpha) * (low - y);
    if (y > up) return (2.0 / alpha) * (y - up);
    return 0.0;
}

inline SampleEval make_sample_eval(double y, double low, double up, double alpha) {
    SampleEval s;
    s.y = y;
    s.low = low;
    s.up = up;
    s.covered = (low <= y && y <= up);
    s.width = up - low;
    s.miss_error = winkler_error(y, low, up, alpha);
    return s;
}

inline double picp(std::span<const SampleEval> samples) {
    if (samples.empty()) raise(Errc::EmptySet, "picp of an empty sample set");
    std::size_t covered = 0;
    for (const auto& s : samples) covered += s.covered ? 1 : 0;
    return static_cast<double>(covered) / static_cast<double>(samples.size());
}

// Nominal coverage minus a one-sided binomial confidence margin; converges to
// 1-alpha as n grows.
inline double minimal_acceptable_coverage(std::size_t n, double alpha, double zeta) {
    return (1.0 - alpha) - zeta * std::sqrt((1.0 - alpha) * alpha / static_cast<double>(n));
}

// Test-target range, the width normalizer shared by PINAW and the normalized
// Winkler variants.
inline double target_range(std::span<const SampleEval> samples) {
    if (samples.empty()) raise(Errc::EmptySet, "target range of an empty sample set");
    double lo = samples[0].y, hi = samples[0].y;
    for (const auto& s : samples) {
        lo = std::min(lo, s.y);
        hi = std::max(hi, s.y);
    }
    return hi - lo;
}

inline double mean_width(std::span<const SampleEval> samples) {
    if (samples.empty()) raise(Errc::EmptySet, "mean width of an empty sample set");
    double sum = 0.0;
    for (const auto& s : samples) sum += s.width;
    return sum / static_cast<double>(samples.size());
}

inline double pinaw(std::span<const SampleEval> samples, double xi) {
    if (xi <= kRangeFloor) raise(Errc::DegenerateRange, "target range too small for pinaw");
    return mean_width(samples) / xi;
}

// Coefficient of variation of the widths: sample (n-1) standard deviation over
// the mean. Scale-invariant adaptivity proxy.
inline double cv_width(std::span<const SampleEval> samples) {
    const std::size_t n = samples.size();
    if (n < 2) raise(Errc::EmptySet, "cv_width needs at least two samples");
    const double mu = mean_width(samples);
    if (mu <= 0.0) raise(Errc::ZeroMeanWidth, "cv_width with nonpositive mean width");
    double ss = 0.0;
    for (const auto& s : samples) {
        const double e = s.width - mu;
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(n - 1)) / mu;
}

// exp(kappa * rho) with rho the relative undercoverage below c_a; exactly 1
// when coverage is acceptable. rho is defined as 0 when the shortfall is 0,
// which also settles the 0/0 case at full coverage.
inline double undercoverage_penalty(double picp_value, double c_a, double kappa) {
    const double delta_c = std::max(0.0, c_a - picp_value);
    const double rho = delta_c == 0.0 ? 0.0 : delta_c / (1.0 - picp_value);
    return std::exp(kappa * rho);
}

struct EvaluationReport {
    std::size_t n = 0;
    double picp = 0.0;
    double c_a = 0.0;
    std::optional<double> pinaw;     // absent when the target range is degenerate
    std::optional<double> cv_width;  // absent for n < 2 or zero mean width
    double mean_winkler = 0.0;
    double p_uc = 1.0;
    double mmw = 0.0;
    double xi = 0.0;
};

// Aggregate the full metric suite. The undercoverage penalty is computed once
// from the whole sample set and applied uniformly to every miss term. With
// normalize_by_range, widths and miss terms are divided by xi before
// aggregation.
inline EvaluationReport mmw(std::span<const SampleEval> samples, double alpha, double zeta,
                            double kappa, bool normalize_by_range = false) {
    const std::size_t n = samples.size();
    if (n == 0) raise(Errc::EmptySet, "mmw of an empty sample set");

    EvaluationReport rep;
    rep.n = n;
    rep.picp = picp(samples);
    rep.c_a = minimal_acceptable_coverage(n, alpha, zeta);
    rep.xi = target_range(samples);
    rep.p_uc = undercoverage_penalty(rep.picp, rep.c_a, kappa);

    double scale = 1.0;
    if (normalize_by_range) {
        if (rep.xi <= kRangeFloor)
            raise(Errc::DegenerateRange, "target range too small to normalize by");
        scale = 1.0 / rep.xi;
    }

    double winkler_sum = 0.0;
    double mmw_sum = 0.0;
    for (const auto& s : samples) {
        const double w = s.width * scale;
        const double e = s.miss_error * scale;
        winkler_sum += w + e;
        mmw_sum += w + rep.p_uc * e;
    }
    rep.mean_winkler = winkler_sum / static_cast<double>(n);
    rep.mmw = mmw_sum / static_cast<double>(n);

    if (rep.xi > kRangeFloor) rep.pinaw = pinaw(samples, rep.xi);
    if (n >= 2 && mean_width(samples) > 0.0) rep.cv_width = cv_width(samples);
    return rep;
}

}  // namespace dcp
