#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "dcp/error.hpp"
#include "dcp/oracles.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/rng.hpp"
#include "dcp/synth.hpp"

namespace dcp {

// How the stand-in predictor spreads its draws around the clean waveform.
struct SigmaMatched {};  // the injected noise scale sigma(t), known exactly

struct SigmaConstant {
    double sigma = 0.05;
};

struct SigmaTwoRegime {
    double base = 0.05;
    double tail = 5.0;
    double start_fraction = 0.9;  // switch point as a fraction of the series
};

using SigmaMode = std::variant<SigmaMatched, SigmaConstant, SigmaTwoRegime>;

struct BenchOracle {
    int m_draws = 100;
    SigmaMode sigma = SigmaMatched{};
};

struct BenchSpec {
    SeriesSpec series;
    SplitSpec split;
    BenchOracle oracle;
};

inline BenchSpec aleatoric_bench_spec() {
    BenchSpec b;
    b.series = aleatoric_series_spec();
    b.oracle.sigma = SigmaMatched{};
    return b;
}

// Dispersion-blind stand-in: the tail shift is invisible to the oracle, which
// is the stress case where conformal calibration alone cannot help.
inline BenchSpec epistemic_bench_spec() {
    BenchSpec b;
    b.series = epistemic_series_spec();
    b.oracle.sigma = SigmaConstant{0.05};
    return b;
}

struct BenchBundle {
    std::vector<double> series;       // observed series (scaled units: no)
    std::vector<XyPair> pairs;        // raw windowed pairs
    MinMaxScaler scaler;              // fit on the training portion
    std::vector<DrawRecord> calib;    // scaled records with oracle draws
    std::vector<DrawRecord> test;
    double shift_start_time = -1.0;   // days; negative when no shift
};

// Build the full desk-scale benchmark: synthesize the series, window and
// split it, then attach oracle draw vectors to the calibration and test
// pairs. Draws are emitted in scaled units so the root-finder defaults for
// [0,1]-normalized targets apply directly.
inline BenchBundle make_bench_bundle(const BenchSpec& spec, std::uint64_t seed) {
    // The clean waveform drives both the noise scale and the oracle mean; the
    // base waveform (without shift harmonics) is what a predictor trained
    // before the shift keeps forecasting.
    SeriesSpec clean_spec = spec.series;
    clean_spec.noise.reset();
    const std::vector<double> clean = gen_signal(clean_spec);

    SeriesSpec base_spec = clean_spec;
    base_spec.shift.reset();
    const std::vector<double> base = gen_signal(base_spec);

    BenchBundle out;
    double sigma_n = 0.0;
    if (spec.series.noise) {
        sigma_n = solve_noise_scale(clean, spec.series.noise->snr_target, spec.series.noise->p);
        out.series = add_heteroscedastic_noise(clean, spec.series.noise->snr_target,
                                               spec.series.noise->p, seed);
    } else {
        out.series = clean;
    }

    out.pairs = window_xy(out.series, spec.split);
    SplitResult split = split_and_scale(out.pairs, spec.split);
    out.scaler = split.scaler;
    if (spec.series.shift) out.shift_start_time = spec.series.shift->start_fraction * spec.series.days;

    const double dt = 1.0 / static_cast<double>(spec.series.samples_per_day);
    auto sigma_at = [&](std::size_t idx) -> double {
        const double t = static_cast<double>(idx) * dt;
        if (std::holds_alternative<SigmaMatched>(spec.oracle.sigma)) {
            if (!spec.series.noise)
                raise(Errc::BadInput, "matched oracle dispersion requires a noise spec");
            return noise_sigma_at(clean[idx], sigma_n, spec.series.noise->p);
        }
        if (const auto* c = std::get_if<SigmaConstant>(&spec.oracle.sigma)) return c->sigma;
        const auto& two = std::get<SigmaTwoRegime>(spec.oracle.sigma);
        return t >= two.start_fraction * spec.series.days ? two.tail : two.base;
    };

    Rng rng(seed + 0x9e3779b97f4a7c15ULL);  // decouple draw noise from series noise
    auto make_records = [&](const std::vector<XyPair>& subset, const char* prefix) {
        std::vector<DrawRecord> recs;
        recs.reserve(subset.size());
        for (const auto& p : subset) {
            DrawRecord rec;
            rec.id = std::string(prefix) + std::to_string(p.target_index);
            rec.y = p.y;  // already scaled by split_and_scale
            const double mu = out.scaler.transform(base[p.target_index]);
            const double sigma = out.scaler.scale_width(sigma_at(p.target_index));
            rec.draws.resize(static_cast<std::size_t>(spec.oracle.m_draws));
            for (double& d : rec.draws) d = rng.normal(mu, sigma);
            recs.push_back(std::move(rec));
        }
        return recs;
    };
    out.calib = make_records(split.calib, "c");
    out.test = make_records(split.test, "t");
    return out;
}

}  // namespace dcp
