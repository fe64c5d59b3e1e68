#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "dcp/error.hpp"
#include "dcp/rng.hpp"

namespace dcp {

struct Harmonic {
    double amplitude = 0.0;
    double frequency = 0.0;  // cycles per day
    double phase = 0.0;      // radians
};

struct HeteroscedasticNoise {
    double snr_target = 15.0;
    double p = 0.8;  // exponent of the amplitude-dependent noise scale
};

struct RegimeShift {
    std::vector<Harmonic> extra_harmonics;
    double start_fraction = 0.9;  // hard switch at start_fraction * days
};

struct SeriesSpec {
    std::vector<Harmonic> harmonics;
    double days = 30.0;
    int samples_per_day = 288;  // five-minute spacing
    std::optional<HeteroscedasticNoise> noise;
    std::optional<RegimeShift> shift;
};

struct SplitSpec {
    int horizon = 1;
    int lookback = 3;  // three times the forecast horizon
    double train_fraction = 0.7;
    double calib_fraction = 0.2;
    double test_fraction = 0.1;
};

inline double harmonic_sum(const std::vector<Harmonic>& hs, double t_days) {
    double z = 0.0;
    for (const auto& h : hs)
        z += h.amplitude * std::sin(2.0 * std::numbers::pi * h.frequency * t_days + h.phase);
    return z;
}

// Clean signal on a uniform grid of samples_per_day points per day, t starting
// at 0. Shift harmonics switch on for t >= start_fraction * days.
inline std::vector<double> gen_signal(const SeriesSpec& spec) {
    const auto n = static_cast<std::size_t>(
        std::llround(spec.days * static_cast<double>(spec.samples_per_day)));
    const double dt = 1.0 / static_cast<double>(spec.samples_per_day);
    const double shift_start = spec.shift ? spec.shift->start_fraction * spec.days : 0.0;

    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        double v = harmonic_sum(spec.harmonics, t);
        if (spec.shift && t >= shift_start) v += harmonic_sum(spec.shift->extra_harmonics, t);
        z[i] = v;
    }
    return z;
}

// Noise scale sigma_n solving SNR = mean(z^2) / mean(sigma(t)^2) for
// sigma(t) = sigma_n * |z(t)|^p.
inline double solve_noise_scale(const std::vector<double>& signal, double snr_target, double p) {
    if (signal.empty()) raise(Errc::EmptySet, "noise scale of an empty signal");
    if (!(snr_target > 0.0)) raise(Errc::BadInput, "snr target must be positive");
    double power = 0.0, shape = 0.0;
    for (double z : signal) {
        power += z * z;
        shape += std::pow(std::abs(z), 2.0 * p);
    }
    if (shape == 0.0) return 0.0;  // zero signal carries zero noise
    return std::sqrt(power / (snr_target * shape));
}

inline double noise_sigma_at(double clean_value, double sigma_n, double p) {
    return sigma_n * std::pow(std::abs(clean_value), p);
}

inline std::vector<double> add_heteroscedastic_noise(const std::vector<double>& signal,
                                                     double snr_target, double p,
                                                     std::uint64_t rng_seed) {
    const double sigma_n = solve_noise_scale(signal, snr_target, p);
    Rng rng(rng_seed);
    std::vector<double> out(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        out[i] = signal[i] + rng.normal(0.0, noise_sigma_at(signal[i], sigma_n, p));
    }
    return out;
}

struct XyPair {
    std::vector<double> x;
    double y = 0.0;
    std::size_t target_index = 0;  // position of y in the source series
};

// Stride-1 sliding windows; y sits `horizon` steps after the window end.
inline std::vector<XyPair> window_xy(const std::vector<double>& series, const SplitSpec& split) {
    const auto lookback = static_cast<std::size_t>(split.lookback);
    const auto horizon = static_cast<std::size_t>(split.horizon);
    if (series.size() < lookback + horizon)
        raise(Errc::SeriesTooShort, "series shorter than lookback + horizon");

    const std::size_t n_pairs = series.size() - lookback - horizon + 1;
    std::vector<XyPair> pairs(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        pairs[i].x.assign(series.begin() + static_cast<std::ptrdiff_t>(i),
                          series.begin() + static_cast<std::ptrdiff_t>(i + lookback));
        pairs[i].target_index = i + lookback + horizon - 1;
        pairs[i].y = series[pairs[i].target_index];
    }
    return pairs;
}

struct MinMaxScaler {
    double min = 0.0;
    double max = 1.0;

    double transform(double v) const { return (v - min) / (max - min); }
    double inverse(double v) const { return min + v * (max - min); }
    double scale_width(double w) const { return w / (max - min); }
};

struct SplitResult {
    std::vector<XyPair> train;
    std::vector<XyPair> calib;
    std::vector<XyPair> test;
    MinMaxScaler scaler;
};

// Chronological 70/20/10 split; the scaler is fit on the training pairs only
// (inputs and targets) and applied to every subset. Out-of-range values in
// later subsets are left unclipped.
inline SplitResult split_and_scale(const std::vector<XyPair>& pairs, const SplitSpec& split) {
    const std::size_t n = pairs.size();
    const auto n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * split.train_fraction));
    const auto n_calib = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * split.calib_fraction));
    const std::size_t n_train_calib = n_train + n_calib;
    if (n_train == 0 || n_calib == 0 || n_train_calib >= n)
        raise(Errc::EmptySplit, "a split subset would be empty");

    double lo = pairs[0].y, hi = pairs[0].y;
    for (std::size_t i = 0; i < n_train; ++i) {
        lo = std::min(lo, pairs[i].y);
        hi = std::max(hi, pairs[i].y);
        for (double v : pairs[i].x) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) raise(Errc::DegenerateScale, "training data has zero range");

    SplitResult out;
    out.scaler = MinMaxScaler{lo, hi};
    auto scale_pair = [&](const XyPair& p) {
        XyPair q = p;
        q.y = out.scaler.transform(p.y);
        for (double& v : q.x) v = out.scaler.transform(v);
        return q;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const XyPair q = scale_pair(pairs[i]);
        if (i < n_train) {
            out.train.push_back(q);
        } else if (i < n_train_calib) {
            out.calib.push_back(q);
        } else {
            out.test.push_back(q);
        }
    }
    return out;
}

// Built-in benchmark presets.
inline SeriesSpec aleatoric_series_spec() {
    SeriesSpec s;
    s.harmonics = {Harmonic{1.0, 1.0, 0.0}};
    s.days = 30.0;
    s.samples_per_day = 288;
    s.noise = HeteroscedasticNoise{15.0, 0.8};
    return s;
}

inline SeriesSpec epistemic_series_spec() {
    SeriesSpec s;
    s.harmonics = {Harmonic{1.0, 1.0, 0.0}};
    s.days = 10.0;
    s.samples_per_day = 288;
    s.shift = RegimeShift{
        {Harmonic{0.5, 0.03, std::numbers::pi}, Harmonic{0.15, 6.0, 0.0}}, 0.9};
    return s;
}

}  // namespace dcp
