#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dcp/bands.hpp"
#include "dcp/draws.hpp"
#include "dcp/error.hpp"

namespace dcp {

enum class ScoreFamily {
    Residual,
    Z,
    IntervalQuantile,
    IntervalHDI,
    Knn,
};

inline const char* family_name(ScoreFamily f) {
    switch (f) {
        case ScoreFamily::Residual: return "residual";
        case ScoreFamily::Z: return "z";
        case ScoreFamily::IntervalQuantile: return "qis";
        case ScoreFamily::IntervalHDI: return "hdi";
        case ScoreFamily::Knn: return "knn";
    }
    return "unknown";
}

inline std::optional<ScoreFamily> family_from_name(const std::string& s) {
    if (s == "residual") return ScoreFamily::Residual;
    if (s == "z") return ScoreFamily::Z;
    if (s == "qis") return ScoreFamily::IntervalQuantile;
    if (s == "hdi") return ScoreFamily::IntervalHDI;
    if (s == "knn") return ScoreFamily::Knn;
    return std::nullopt;
}

// Which score family to evaluate and how; shared verbatim between calibration
// and inference so both sides always agree.
struct ScoreSpec {
    ScoreFamily family = ScoreFamily::Residual;
    bool scaled = false;       // divide interval violation by the base width
    int k = 10;                // KNN neighbor count, must stay <= M
    double band_alpha = 0.1;   // nominal level of the base inner band
    double sigma_floor = 1e-9;
    double width_floor = 1e-9;
};

inline double score_residual(double y, const DrawVector& dv) { return std::abs(y - dv.mean); }

inline double score_z(double y, const DrawVector& dv, double sigma_floor) {
    return std::abs(y - dv.mean) / std::max(dv.std_dev, sigma_floor);
}

// Negative inside the band, zero on its boundary, positive outside.
inline double score_interval(double y, const BaseBand& band, bool scaled, double width_floor) {
    const double raw = std::max(band.low - y, y - band.up);
    if (!scaled) return raw;
    return raw / std::max(band.width(), width_floor);
}

// Median of the k smallest |y - draw| distances. The sorted draws are merged
// from both sides of y's insertion point, which yields the k nearest
// distances already in nondecreasing order.
inline double knn_distance(double y, const DrawVector& dv, int k) {
    const std::size_t m = dv.sorted_draws.size();
    if (k < 1) raise(Errc::BadInput, "knn k must be >= 1");
    if (static_cast<std::size_t>(k) > m) raise(Errc::KTooLarge, "knn k exceeds the draw count");

    const auto& s = dv.sorted_draws;
    auto r = static_cast<std::ptrdiff_t>(std::lower_bound(s.begin(), s.end(), y) - s.begin());
    std::ptrdiff_t l = r - 1;

    const int half = (k - 1) / 2;
    double med_lo = 0.0, med_hi = 0.0;
    for (int taken = 0; taken < k; ++taken) {
        double d;
        const bool left_ok = l >= 0;
        const bool right_ok = r < static_cast<std::ptrdiff_t>(m);
        if (left_ok && (!right_ok || y - s[static_cast<std::size_t>(l)] <=
                                         s[static_cast<std::size_t>(r)] - y)) {
            d = y - s[static_cast<std::size_t>(l)];
            --l;
        } else {
            d = s[static_cast<std::size_t>(r)] - y;
            ++r;
        }
        if (taken == half) med_lo = d;
        if (taken == k / 2) {
            med_hi = d;
            break;
        }
    }
    return 0.5 * (med_lo + med_hi);
}

// Median of all M^2 pairwise |draw_i - draw_j| distances, self-pairs included.
inline double knn_normalizer(const DrawVector& dv) {
    const std::size_t m = dv.sorted_draws.size();
    if (m == 0) raise(Errc::EmptyDraws, "knn normalizer of an empty draw vector");
    std::vector<double> dist;
    dist.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            dist.push_back(std::abs(dv.sorted_draws[i] - dv.sorted_draws[j]));
        }
    }
    const std::size_t n = dist.size();
    auto mid = dist.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(dist.begin(), mid, dist.end());
    const double hi = *mid;
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(dist.begin(), mid);
    return 0.5 * (lo + hi);
}

inline double score_knn(double y, const DrawVector& dv, int k, double width_floor) {
    return knn_distance(y, dv, k) / std::max(knn_normalizer(dv), width_floor);
}

// Per-input score evaluator. Construction runs the expensive part once (band,
// KNN normalizer); evaluation at a candidate y is then cheap and pure.
class ScoreFn {
  public:
    ScoreFn(ScoreSpec spec, DrawVector dv) : spec_(spec), dv_(std::move(dv)) {
        switch (spec_.family) {
            case ScoreFamily::Residual:
                break;
            case ScoreFamily::Z:
                sigma_ = std::max(dv_.std_dev, spec_.sigma_floor);
                break;
            case ScoreFamily::IntervalQuantile:
                band_ = quantile_band(dv_, spec_.band_alpha);
                break;
            case ScoreFamily::IntervalHDI:
                band_ = hdi_band(dv_, spec_.band_alpha);
                break;
            case ScoreFamily::Knn:
                if (static_cast<std::size_t>(spec_.k) > dv_.size())
                    raise(Errc::KTooLarge, "knn k exceeds the draw count");
                knn_norm_ = std::max(knn_normalizer(dv_), spec_.width_floor);
                break;
        }
    }

    double operator()(double y) const {
        switch (spec_.family) {
            case ScoreFamily::Residual: return score_residual(y, dv_);
            case ScoreFamily::Z: return std::abs(y - dv_.mean) / sigma_;
            case ScoreFamily::IntervalQuantile:
            case ScoreFamily::IntervalHDI:
                return score_interval(y, *band_, spec_.scaled, spec_.width_floor);
            case ScoreFamily::Knn: return knn_distance(y, dv_, spec_.k) / knn_norm_;
        }
        return 0.0;
    }

    const ScoreSpec& spec() const { return spec_; }
    const DrawVector& draws() const { return dv_; }
    const std::optional<BaseBand>& band() const { return band_; }
    double anchor() const { return dv_.median; }

  private:
    ScoreSpec spec_;
    DrawVector dv_;
    std::optional<BaseBand> band_;
    double sigma_ = 0.0;
    double knn_norm_ = 0.0;
};

inline ScoreFn make_score_fn(const ScoreSpec& spec, DrawVector dv) {
    return ScoreFn(spec, std::move(dv));
}

}  // namespace dcp
