#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcp/bands.hpp"
#include "dcp/draws.hpp"
#include "dcp/error.hpp"
#include "dcp/scores.hpp"

namespace dcp {

enum class IntervalStatus {
    TwoSided,         // two crossings, regular interval
    SingleRoot,       // one crossing survived the retries; degenerate at the root
    MedianFallback,   // no crossing found; degenerate at the anchor
    OutermostOfMany,  // more than two crossings; hull of the outermost pair
};

inline const char* status_name(IntervalStatus s) {
    switch (s) {
        case IntervalStatus::TwoSided: return "two_sided";
        case IntervalStatus::SingleRoot: return "single_root";
        case IntervalStatus::MedianFallback: return "median_fallback";
        case IntervalStatus::OutermostOfMany: return "outermost_of_many";
    }
    return "unknown";
}

inline std::optional<IntervalStatus> status_from_name(const std::string& s) {
    if (s == "two_sided") return IntervalStatus::TwoSided;
    if (s == "single_root") return IntervalStatus::SingleRoot;
    if (s == "median_fallback") return IntervalStatus::MedianFallback;
    if (s == "outermost_of_many") return IntervalStatus::OutermostOfMany;
    return std::nullopt;
}

struct PredictionInterval {
    double low = 0.0;
    double up = 0.0;
    IntervalStatus status = IntervalStatus::TwoSided;

    double width() const { return up - low; }
    bool contains(double y) const { return low <= y && y <= up; }
};

struct RootFindConfig {
    double h0 = 1e-6;       // initial grid step, unit of y
    double gamma = 1.167;   // geometric expansion factor
    int depth = 100;        // grid levels per side
    double tol = 1e-10;     // bisection absolute tolerance
    int max_retries = 2;
    double retry_h0_shrink = 1e-2;
    int retry_depth_increase = 50;
};

struct BracketReport {
    std::size_t grid_points_evaluated = 0;
    std::vector<std::pair<double, double>> sign_changes;
    int retries_used = 0;
};

// Ascending grid {anchor} U {anchor +- h0*gamma^j : j = 0..depth-1};
// 2*depth + 1 points.
inline std::vector<double> build_grid(double anchor, const RootFindConfig& cfg) {
    std::vector<double> offsets(static_cast<std::size_t>(cfg.depth));
    double h = cfg.h0;
    for (int j = 0; j < cfg.depth; ++j) {
        offsets[static_cast<std::size_t>(j)] = h;
        h *= cfg.gamma;
    }
    std::vector<double> grid;
    grid.reserve(2 * offsets.size() + 1);
    for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) grid.push_back(anchor - *it);
    grid.push_back(anchor);
    for (double off : offsets) grid.push_back(anchor + off);
    return grid;
}

namespace detail {

inline bool is_sign_change(double fl, double fr) {
    if (fl == 0.0 || fr == 0.0) return !(fl == 0.0 && fr == 0.0);
    return (fl < 0.0) != (fr < 0.0);
}

}  // namespace detail

// Bisection on a bracket with f(lo)*f(hi) <= 0; returns the midpoint of the
// final bracket, whose width is at most tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
    if (!(lo < hi)) raise(Errc::InvalidBracket, "bisect requires lo < hi");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) raise(Errc::InvalidBracket, "no sign change on [lo, hi]");

    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return lo + 0.5 * (hi - lo);
}

// Invert f(y) = s(y) - qhat around the anchor: geometric-grid bracketing,
// bisection refinement, retry on fewer than two crossings, and the failure
// policy that always yields a valid interval. Non-finite grid values are
// skipped for sign-change detection.
template <typename F>
PredictionInterval find_interval(F&& f, double anchor, const RootFindConfig& cfg,
                                 BracketReport* report = nullptr) {
    BracketReport local;
    RootFindConfig attempt_cfg = cfg;

    std::vector<std::pair<double, double>> brackets;
    for (int attempt = 0;; ++attempt) {
        brackets.clear();
        const std::vector<double> grid = build_grid(anchor, attempt_cfg);
        local.grid_points_evaluated += grid.size();

        bool have_prev = false;
        double prev_y = 0.0, prev_f = 0.0;
        for (double y : grid) {
            const double fy = f(y);
            if (!std::isfinite(fy)) continue;
            if (have_prev && detail::is_sign_change(prev_f, fy)) brackets.emplace_back(prev_y, y);
            have_prev = true;
            prev_y = y;
            prev_f = fy;
        }

        if (brackets.size() >= 2 || attempt >= cfg.max_retries) break;
        attempt_cfg.h0 *= cfg.retry_h0_shrink;
        attempt_cfg.depth += cfg.retry_depth_increase;
        local.retries_used = attempt + 1;
    }

    local.sign_changes = brackets;
    if (report != nullptr) *report = local;

    PredictionInterval out;
    if (brackets.empty()) {
        out.low = out.up = anchor;
        out.status = IntervalStatus::MedianFallback;
        return out;
    }
    if (brackets.size() == 1) {
        const double root = bisect(f, brackets[0].first, brackets[0].second, cfg.tol);
        out.low = out.up = root;
        out.status = IntervalStatus::SingleRoot;
        return out;
    }
    out.low = bisect(f, brackets.front().first, brackets.front().second, cfg.tol);
    out.up = bisect(f, brackets.back().first, brackets.back().second, cfg.tol);
    if (out.up < out.low) std::swap(out.low, out.up);
    out.status =
        brackets.size() == 2 ? IntervalStatus::TwoSided : IntervalStatus::OutermostOfMany;
    return out;
}

// Closed-form inversion for the monotone score families. An empty interval
// (possible under negative qhat) collapses to its degenerate midpoint.
inline PredictionInterval analytic_interval(const ScoreSpec& spec, const DrawVector& dv,
                                            const std::optional<BaseBand>& band, double qhat) {
    double low = 0.0, up = 0.0;
    switch (spec.family) {
        case ScoreFamily::Residual:
            low = dv.mean - qhat;
            up = dv.mean + qhat;
            break;
        case ScoreFamily::Z: {
            const double s = std::max(dv.std_dev, spec.sigma_floor);
            low = dv.mean - qhat * s;
            up = dv.mean + qhat * s;
            break;
        }
        case ScoreFamily::IntervalQuantile:
        case ScoreFamily::IntervalHDI: {
            const BaseBand b =
                band ? *band
                     : (spec.family == ScoreFamily::IntervalQuantile
                            ? quantile_band(dv, spec.band_alpha)
                            : hdi_band(dv, spec.band_alpha));
            const double slack = spec.scaled ? qhat * std::max(b.width(), spec.width_floor) : qhat;
            low = b.low - slack;
            up = b.up + slack;
            break;
        }
        case ScoreFamily::Knn:
            raise(Errc::UnsupportedFamily, "no closed form for the knn score");
    }
    if (up < low) {
        const double mid = 0.5 * (low + up);
        return PredictionInterval{mid, mid, IntervalStatus::MedianFallback};
    }
    return PredictionInterval{low, up, IntervalStatus::TwoSided};
}

}  // namespace dcp
