#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dcp/calibrate.hpp"
#include "dcp/config.hpp"
#include "dcp/draws.hpp"
#include "dcp/error.hpp"
#include "dcp/metrics.hpp"
#include "dcp/rootfind.hpp"
#include "dcp/scores.hpp"

namespace dcp {

// One input record: a draw vector plus an optional revealed target. Targets
// are mandatory on calibration records, optional on test records.
struct DrawRecord {
    std::string id;
    std::optional<double> y;
    std::vector<double> draws;
};

struct RowResult {
    std::string id;
    std::optional<double> y;
    PredictionInterval interval;
    double qhat = 0.0;  // threshold in effect for this row
    std::optional<std::string> error;
};

struct RunOutput {
    std::vector<RowResult> rows;
    std::optional<EvaluationReport> report;  // absent when nothing was scorable
    double initial_qhat = 0.0;
};

inline std::vector<double> calibration_scores(const std::vector<DrawRecord>& calib,
                                              const ScoreSpec& spec) {
    std::vector<double> scores;
    scores.reserve(calib.size());
    for (const auto& rec : calib) {
        if (!rec.y) {
            raise(Errc::BadInput, "calibration record '" + rec.id + "' is missing its target");
        }
        ScoreFn fn(spec, summarize_draws(rec.draws));
        const double s = fn(*rec.y);
        if (!std::isfinite(s)) {
            raise(Errc::NonFinite, "calibration record '" + rec.id + "' yields a non-finite score");
        }
        scores.push_back(s);
    }
    return scores;
}

// Static or sliding-window conformal run over test records in file order.
// Per-record score failures are recorded on the row and the run continues;
// calibration failures abort since they would silently change the threshold.
inline RunOutput run_pipeline(const std::vector<DrawRecord>& calib,
                              const std::vector<DrawRecord>& test, const Config& cfg,
                              bool analytic = false, bool normalize_by_range = false) {
    cfg.validate();
    std::vector<double> scores = calibration_scores(calib, cfg.score);
    if (cfg.window_len > 0 && static_cast<std::size_t>(cfg.window_len) < scores.size()) {
        scores.erase(scores.begin(),
                     scores.end() - static_cast<std::ptrdiff_t>(cfg.window_len));
    }

    std::optional<CalibrationWindow> window;
    double qhat;
    if (cfg.online) {
        window.emplace(scores, cfg.alpha);
        qhat = window->qhat();
    } else {
        qhat = threshold(scores, cfg.alpha);
    }

    RunOutput out;
    out.initial_qhat = qhat;
    out.rows.reserve(test.size());
    std::vector<SampleEval> evals;
    evals.reserve(test.size());

    for (const auto& rec : test) {
        RowResult row;
        row.id = rec.id;
        row.y = rec.y;
        row.qhat = qhat;
        try {
            ScoreFn fn(cfg.score, summarize_draws(rec.draws));
            if (analytic && cfg.score.family != ScoreFamily::Knn) {
                row.interval = analytic_interval(cfg.score, fn.draws(), fn.band(), qhat);
            } else {
                const double q = qhat;
                row.interval = find_interval([&](double y) { return fn(y) - q; }, fn.anchor(),
                                             cfg.root);
            }
            if (rec.y) {
                evals.push_back(
                    make_sample_eval(*rec.y, row.interval.low, row.interval.up, cfg.alpha));
                if (window) {
                    window->update(fn(*rec.y));
                    qhat = window->qhat();
                }
            }
        } catch (const Error& e) {
            row.error = e.what();
        }
        out.rows.push_back(std::move(row));
    }

    if (!evals.empty()) {
        out.report = mmw(evals, cfg.alpha, cfg.zeta, cfg.kappa, normalize_by_range);
    }
    return out;
}

}  // namespace dcp
