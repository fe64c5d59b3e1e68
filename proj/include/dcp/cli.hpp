#pragma once

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dcp/bench.hpp"
#include "dcp/calibrate.hpp"
#include "dcp/config.hpp"
#include "dcp/error.hpp"
#include "dcp/io.hpp"
#include "dcp/oracles.hpp"
#include "dcp/pipeline.hpp"
#include "dcp/rootfind.hpp"
#include "dcp/scores.hpp"

namespace dcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitInsufficientCalibration = 3;

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("DCP_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 0;
}

// ---- synth ----

struct SynthOptions {
    std::string preset;
    std::string spec_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> m_draws;
    std::optional<double> tail_sigma;  // inflate oracle dispersion in the shifted tail
};

inline BenchSpec parse_bench_spec(const nlohmann::json& j) {
    reject_unknown_keys(
        j, {"harmonics", "days", "samples_per_day", "noise", "shift", "split", "oracle"}, "spec");
    BenchSpec spec;
    spec.series.harmonics.clear();

    auto parse_harmonic = [](const nlohmann::json& h, const std::string& where) {
        reject_unknown_keys(h, {"amplitude", "frequency", "phase"}, where);
        Harmonic out;
        out.amplitude = h.at("amplitude").get<double>();
        out.frequency = h.at("frequency").get<double>();
        if (h.contains("phase")) out.phase = h["phase"].get<double>();
        return out;
    };

    if (!j.contains("harmonics") || !j["harmonics"].is_array() || j["harmonics"].empty())
        raise(Errc::BadInput, "spec: 'harmonics' must be a non-empty array");
    for (const auto& h : j["harmonics"]) spec.series.harmonics.push_back(parse_harmonic(h, "spec.harmonics"));
    if (j.contains("days")) spec.series.days = j["days"].get<double>();
    if (j.contains("samples_per_day")) spec.series.samples_per_day = j["samples_per_day"].get<int>();
    if (spec.series.samples_per_day < 1) raise(Errc::BadInput, "spec: samples_per_day must be >= 1");

    if (j.contains("noise") && !j["noise"].is_null()) {
        const auto& n = j["noise"];
        reject_unknown_keys(n, {"snr_target", "p"}, "spec.noise");
        HeteroscedasticNoise noise;
        if (n.contains("snr_target")) noise.snr_target = n["snr_target"].get<double>();
        if (n.contains("p")) noise.p = n["p"].get<double>();
        if (!(noise.snr_target > 0.0)) raise(Errc::BadInput, "spec.noise: snr_target must be positive");
        spec.series.noise = noise;
    }
    if (j.contains("shift") && !j["shift"].is_null()) {
        const auto& s = j["shift"];
        reject_unknown_keys(s, {"extra_harmonics", "start_fraction"}, "spec.shift");
        RegimeShift shift;
        if (!s.contains("extra_harmonics") || !s["extra_harmonics"].is_array())
            raise(Errc::BadInput, "spec.shift: 'extra_harmonics' must be an array");
        for (const auto& h : s["extra_harmonics"])
            shift.extra_harmonics.push_back(parse_harmonic(h, "spec.shift.extra_harmonics"));
        if (s.contains("start_fraction")) shift.start_fraction = s["start_fraction"].get<double>();
        if (!(shift.start_fraction > 0.0 && shift.start_fraction < 1.0))
            raise(Errc::BadInput, "spec.shift: start_fraction must lie in (0,1)");
        spec.series.shift = shift;
    }
    if (j.contains("split")) {
        const auto& s = j["split"];
        reject_unknown_keys(s, {"horizon", "lookback", "fractions"}, "spec.split");
        if (s.contains("horizon")) spec.split.horizon = s["horizon"].get<int>();
        if (s.contains("lookback")) spec.split.lookback = s["lookback"].get<int>();
        if (spec.split.horizon < 1 || spec.split.lookback < 1)
            raise(Errc::BadInput, "spec.split: horizon and lookback must be >= 1");
        if (s.contains("fractions")) {
            const auto& f = s["fractions"];
            if (!f.is_array() || f.size() != 3)
                raise(Errc::BadInput, "spec.split: 'fractions' must be [train, calib, test]");
            spec.split.train_fraction = f[0].get<double>();
            spec.split.calib_fraction = f[1].get<double>();
            spec.split.test_fraction = f[2].get<double>();
            const double sum = spec.split.train_fraction + spec.split.calib_fraction +
                               spec.split.test_fraction;
            if (spec.split.train_fraction <= 0.0 || spec.split.calib_fraction <= 0.0 ||
                spec.split.test_fraction <= 0.0 || std::abs(sum - 1.0) > 1e-9)
                raise(Errc::BadInput, "spec.split: fractions must be positive and sum to 1");
        }
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        reject_unknown_keys(o, {"m_draws", "sigma"}, "spec.oracle");
        if (o.contains("m_draws")) spec.oracle.m_draws = o["m_draws"].get<int>();
        if (spec.oracle.m_draws < 1) raise(Errc::BadInput, "spec.oracle: m_draws must be >= 1");
        if (o.contains("sigma")) {
            const auto& s = o["sigma"];
            if (s.is_string() && s.get<std::string>() == "matched") {
                spec.oracle.sigma = SigmaMatched{};
            } else if (s.is_number()) {
                spec.oracle.sigma = SigmaConstant{s.get<double>()};
            } else if (s.is_object()) {
                reject_unknown_keys(s, {"base", "tail", "start_fraction"}, "spec.oracle.sigma");
                SigmaTwoRegime two;
                two.base = s.at("base").get<double>();
                two.tail = s.at("tail").get<double>();
                if (s.contains("start_fraction")) two.start_fraction = s["start_fraction"].get<double>();
                spec.oracle.sigma = two;
            } else {
                raise(Errc::BadInput, "spec.oracle: sigma must be 'matched', a number, or an object");
            }
        }
    } else if (spec.series.noise) {
        spec.oracle.sigma = SigmaMatched{};
    } else {
        spec.oracle.sigma = SigmaConstant{0.05};
    }
    return spec;
}

inline int cmd_synth(const SynthOptions& opt, std::ostream& out) {
    BenchSpec spec;
    if (!opt.spec_path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(opt.spec_path));
        } catch (const nlohmann::json::exception& e) {
            raise(Errc::BadInput, opt.spec_path + ": " + e.what());
        }
        spec = parse_bench_spec(j);
    } else if (opt.preset == "aleatoric") {
        spec = aleatoric_bench_spec();
    } else if (opt.preset == "epistemic") {
        spec = epistemic_bench_spec();
    } else {
        raise(Errc::BadInput, "unknown preset '" + opt.preset + "'");
    }
    if (opt.m_draws) spec.oracle.m_draws = *opt.m_draws;
    if (opt.tail_sigma) {
        const double base = std::holds_alternative<SigmaConstant>(spec.oracle.sigma)
                                ? std::get<SigmaConstant>(spec.oracle.sigma).sigma
                                : 0.05;
        const double start = spec.series.shift ? spec.series.shift->start_fraction : 0.9;
        spec.oracle.sigma = SigmaTwoRegime{base, *opt.tail_sigma, start};
    }

    const std::uint64_t seed = resolve_seed(opt.seed);
    const BenchBundle bundle = make_bench_bundle(spec, seed);

    const double dt = 1.0 / static_cast<double>(spec.series.samples_per_day);
    std::string series_out;
    for (std::size_t i = 0; i < bundle.series.size(); ++i) {
        series_out += "{\"t\":" + format_double(static_cast<double>(i) * dt) +
                      ",\"value\":" + format_double(bundle.series[i]) + "}\n";
    }
    // Pairs reuse the draw-record schema: the lookback window rides in the
    // "draws" field, in raw series units.
    std::string pairs_out;
    for (const auto& p : bundle.pairs) {
        DrawRecord rec;
        rec.id = "p" + std::to_string(p.target_index);
        rec.y = p.y;
        rec.draws = p.x;
        pairs_out += serialize_draw_record(rec) + "\n";
    }
    std::string calib_out, test_out;
    for (const auto& r : bundle.calib) calib_out += serialize_draw_record(r) + "\n";
    for (const auto& r : bundle.test) test_out += serialize_draw_record(r) + "\n";

    const std::string dir = opt.out_dir.empty() ? "." : opt.out_dir;
    write_file(dir + "/series.jsonl", series_out);
    write_file(dir + "/pairs.jsonl", pairs_out);
    write_file(dir + "/calib.jsonl", calib_out);
    write_file(dir + "/test.jsonl", test_out);

    out << "series: " << bundle.series.size() << " samples\n";
    out << "pairs: " << bundle.pairs.size() << "\n";
    out << "calib records: " << bundle.calib.size() << "\n";
    out << "test records: " << bundle.test.size() << "\n";
    out << "seed: " << seed << "\n";
    return kExitOk;
}

// ---- run ----

struct RunOptions {
    std::string calib_path;
    std::string test_path;
    std::string config_path;
    std::string out_csv = "intervals.csv";
    std::string out_report = "report.json";
    bool analytic = false;
    bool normalize_by_range = false;
    std::optional<std::uint64_t> seed;
    // flag overrides; unset fields fall back to the config file / defaults
    std::optional<double> alpha;
    std::optional<std::string> score;
    std::optional<bool> scaled;
    std::optional<int> k;
    std::optional<double> band_alpha;
    std::optional<bool> online;
    std::optional<int> window_len;
    std::optional<double> zeta;
    std::optional<double> kappa;
};

inline Config resolve_config(const RunOptions& opt) {
    Config cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    if (opt.alpha) {
        cfg.alpha = *opt.alpha;
        if (!opt.band_alpha && opt.config_path.empty()) cfg.score.band_alpha = *opt.alpha;
    }
    if (opt.score) {
        const auto fam = family_from_name(*opt.score);
        if (!fam) raise(Errc::BadInput, "unknown score family '" + *opt.score + "'");
        cfg.score.family = *fam;
    }
    if (opt.scaled) cfg.score.scaled = *opt.scaled;
    if (opt.k) cfg.score.k = *opt.k;
    if (opt.band_alpha) cfg.score.band_alpha = *opt.band_alpha;
    if (opt.online) cfg.online = *opt.online;
    if (opt.window_len) cfg.window_len = *opt.window_len;
    if (opt.zeta) cfg.zeta = *opt.zeta;
    if (opt.kappa) cfg.kappa = *opt.kappa;
    cfg.validate();
    return cfg;
}

inline std::string manifest_json(const std::string& command, const Config& cfg,
                                 std::uint64_t seed, bool analytic, bool normalize_by_range,
                                 const std::vector<std::pair<std::string, std::string>>& inputs) {
    std::string m = "\"manifest\":{";
    m += "\"command\":\"" + json_escape(command) + "\"";
    m += ",\"seed\":" + std::to_string(seed);
    m += ",\"analytic\":" + std::string(analytic ? "true" : "false");
    m += ",\"normalize_by_range\":" + std::string(normalize_by_range ? "true" : "false");
    m += ",\"config\":" + serialize_config(cfg);
    m += ",\"inputs\":{";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i) m += ',';
        m += "\"" + json_escape(inputs[i].first) + "\":\"" + inputs[i].second + "\"";
    }
    m += "}}";
    return m;
}

inline int cmd_run(const RunOptions& opt, std::ostream& out) {
    const Config cfg = resolve_config(opt);
    const std::string calib_bytes = read_file(opt.calib_path);
    const std::string test_bytes = read_file(opt.test_path);
    std::istringstream calib_in(calib_bytes), test_in(test_bytes);
    const std::vector<DrawRecord> calib = parse_draw_records(calib_in, opt.calib_path);
    const std::vector<DrawRecord> test = parse_draw_records(test_in, opt.test_path);

    const RunOutput result = run_pipeline(calib, test, cfg, opt.analytic, opt.normalize_by_range);

    write_file(opt.out_csv, serialize_rows_csv(result.rows, cfg.alpha));

    const std::uint64_t seed = resolve_seed(opt.seed);
    std::string rep = "{";
    rep += serialize_report_fields(result.report);
    rep += ",\"initial_qhat\":" + format_double(result.initial_qhat);
    rep += "," + manifest_json("run", cfg, seed, opt.analytic, opt.normalize_by_range,
                               {{"calib:" + opt.calib_path, hex64(fnv1a64(calib_bytes))},
                                {"test:" + opt.test_path, hex64(fnv1a64(test_bytes))}});
    rep += "}\n";
    write_file(opt.out_report, rep);

    out << "records: " << result.rows.size() << "\n";
    out << "initial qhat: " << format_double(result.initial_qhat) << "\n";
    if (result.report) {
        out << "picp: " << format_double(result.report->picp) << "\n";
        out << "mmw: " << format_double(result.report->mmw) << "\n";
    } else {
        out << "picp: n/a (no scorable records)\n";
    }
    return kExitOk;
}

// ---- report ----

struct ReportOptions {
    std::string csv_path;
    std::string out_report = "report.json";
    double alpha = 0.1;
    double zeta = 1.645;
    double kappa = 2.0;
    bool normalize_by_range = false;
};

inline int cmd_report(const ReportOptions& opt, std::ostream& out) {
    const std::string csv_bytes = read_file(opt.csv_path);
    std::istringstream in(csv_bytes);
    const std::vector<CsvIntervalRow> rows = parse_intervals_csv(in, opt.csv_path);

    std::vector<SampleEval> evals;
    for (const auto& row : rows) {
        if (!row.y || !row.low || !row.up) continue;
        if (row.status.rfind("error:", 0) == 0) continue;
        evals.push_back(make_sample_eval(*row.y, *row.low, *row.up, opt.alpha));
    }

    std::optional<EvaluationReport> report;
    if (!evals.empty())
        report = mmw(evals, opt.alpha, opt.zeta, opt.kappa, opt.normalize_by_range);

    Config cfg;
    cfg.alpha = opt.alpha;
    cfg.zeta = opt.zeta;
    cfg.kappa = opt.kappa;
    cfg.score.band_alpha = opt.alpha;

    std::string rep = "{";
    rep += serialize_report_fields(report);
    rep += "," + manifest_json("report", cfg, 0, false, opt.normalize_by_range,
                               {{"csv:" + opt.csv_path, hex64(fnv1a64(csv_bytes))}});
    rep += "}\n";
    write_file(opt.out_report, rep);

    out << "rows: " << rows.size() << ", scored: " << evals.size() << "\n";
    if (report) out << "picp: " << format_double(report->picp) << "\n";
    return kExitOk;
}

// ---- selftest ----

inline int cmd_selftest(std::ostream& out);  // defined below

// ---- dispatch ----

inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distribution-aware conformal prediction intervals", "dcp"};
    app.require_subcommand(1);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic benchmark");
    synth_cmd->add_option("--preset", synth.preset, "Built-in scenario: aleatoric or epistemic");
    synth_cmd->add_option("--spec", synth.spec_path, "Series spec JSON file");
    synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory");
    synth_cmd->add_option("--seed", synth.seed, "RNG seed (falls back to DCP_SEED, then 0)");
    synth_cmd->add_option("--m-draws", synth.m_draws, "Draws per record");
    synth_cmd->add_option("--tail-sigma", synth.tail_sigma,
                          "Inflate oracle dispersion after the shift point");

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Calibrate and predict intervals");
    run_cmd->add_option("calib", run.calib_path, "Calibration records (JSON lines)")->required();
    run_cmd->add_option("test", run.test_path, "Test records (JSON lines)")->required();
    run_cmd->add_option("--config", run.config_path, "Config JSON file");
    run_cmd->add_option("--out-csv", run.out_csv, "Intervals CSV path");
    run_cmd->add_option("--out-report", run.out_report, "Report JSON path");
    run_cmd->add_option("--alpha", run.alpha, "Nominal miscoverage");
    run_cmd->add_option("--score", run.score, "Score family: residual|z|qis|hdi|knn");
    run_cmd->add_flag_callback("--scaled", [&run]() { run.scaled = true; },
                               "Scale interval violations by the base width");
    run_cmd->add_option("--k", run.k, "KNN neighbor count");
    run_cmd->add_option("--band-alpha", run.band_alpha, "Base band nominal level");
    run_cmd->add_flag_callback("--online", [&run]() { run.online = true; },
                               "Sliding-window recalibration after each revealed target");
    run_cmd->add_option("--window-len", run.window_len,
                        "Cap the calibration window (0 = full calibration set)");
    run_cmd->add_flag("--analytic", run.analytic, "Closed-form inversion where available");
    run_cmd->add_flag("--normalize-range", run.normalize_by_range,
                      "Normalize widths and misses by the test-target range");
    run_cmd->add_option("--zeta", run.zeta, "Coverage margin multiplier");
    run_cmd->add_option("--kappa", run.kappa, "Undercoverage penalty growth factor");
    run_cmd->add_option("--seed", run.seed, "Seed recorded in the manifest");

    ReportOptions report;
    auto* report_cmd = app.add_subcommand("report", "Recompute metrics from an intervals CSV");
    report_cmd->add_option("csv", report.csv_path, "Intervals CSV")->required();
    report_cmd->add_option("--out-report", report.out_report, "Report JSON path");
    report_cmd->add_option("--alpha", report.alpha, "Nominal miscoverage");
    report_cmd->add_option("--zeta", report.zeta, "Coverage margin multiplier");
    report_cmd->add_option("--kappa", report.kappa, "Undercoverage penalty growth factor");
    report_cmd->add_flag("--normalize-range", report.normalize_by_range,
                         "Normalize widths and misses by the test-target range");

    auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in oracle property suite");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitBadInput;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(synth, out);
        if (run_cmd->parsed()) return cmd_run(run, out);
        if (report_cmd->parsed()) return cmd_report(report, out);
        if (selftest_cmd->parsed()) return cmd_selftest(out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == Errc::InsufficientCalibration ? kExitInsufficientCalibration
                                                         : kExitBadInput;
    }
    return kExitBadInput;
}

// Compact property checks runnable from the installed binary; the full suites
// live in the test tree.
inline int cmd_selftest(std::ostream& out) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        Rng rng(1);
        bool ok = true;
        for (int rep = 0; rep < 200 && ok; ++rep) {
            const std::size_t n = 1 + rng.below(40);
            std::vector<double> scores(n);
            for (double& s : scores) s = std::floor(rng.uniform(0.0, 8.0));  // force ties
            const double alpha = rng.uniform(0.05, 0.5);
            std::vector<double> sorted = scores;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t r = threshold_rank(n, alpha);
            if (r > n) {
                try {
                    threshold(scores, alpha);
                    ok = false;
                } catch (const Error& e) {
                    ok = e.code() == Errc::InsufficientCalibration;
                }
            } else {
                const double q = threshold(scores, alpha);
                ok = q == sorted[r - 1];
                std::size_t le = 0;
                for (double s : scores) le += s <= q ? 1 : 0;
                ok = ok && static_cast<double>(le) >=
                               (1.0 - alpha) * static_cast<double>(n) - 1e-9;
            }
        }
        check("threshold matches the sort oracle and covers >= (1-alpha)N scores", ok);
    }

    {
        Rng rng(2);
        bool ok = true;
        const RootFindConfig root;
        for (int rep = 0; rep < 120 && ok; ++rep) {
            const std::size_t m = 5 + rng.below(60);
            std::vector<double> draws(m);
            for (double& d : draws) d = rng.uniform(0.0, 1.0);
            ScoreSpec spec;
            spec.family = rep % 4 == 0   ? ScoreFamily::Residual
                          : rep % 4 == 1 ? ScoreFamily::Z
                          : rep % 4 == 2 ? ScoreFamily::IntervalQuantile
                                         : ScoreFamily::IntervalHDI;
            ScoreFn fn(spec, summarize_draws(draws));
            double qhat = rng.uniform(0.05, 1.0);
            if (spec.family == ScoreFamily::IntervalQuantile ||
                spec.family == ScoreFamily::IntervalHDI) {
                if (rep % 2 == 0) qhat = -0.4 * fn.band()->width() * rng.uniform01();
            }
            const PredictionInterval ana = analytic_interval(spec, fn.draws(), fn.band(), qhat);
            const PredictionInterval num = find_interval(
                [&](double y) { return fn(y) - qhat; }, fn.anchor(), root);
            ok = std::abs(ana.low - num.low) <= 1e-8 && std::abs(ana.up - num.up) <= 1e-8;
        }
        check("numeric inversion reproduces the closed forms within 1e-8", ok);
    }

    {
        Rng rng(3);
        bool ok = true;
        for (int rep = 0; rep < 200 && ok; ++rep) {
            const std::size_t m = 1 + rng.below(30);
            std::vector<double> draws(m);
            for (double& d : draws) d = std::floor(rng.uniform(-5.0, 5.0));
            const DrawVector dv = summarize_draws(draws);
            const int k = 1 + static_cast<int>(rng.below(m));
            const double y = rng.uniform(-6.0, 6.0);

            std::vector<double> dist(m);
            for (std::size_t i = 0; i < m; ++i) dist[i] = std::abs(y - draws[i]);
            std::sort(dist.begin(), dist.end());
            const double want =
                0.5 * (dist[static_cast<std::size_t>((k - 1) / 2)] +
                       dist[static_cast<std::size_t>(k / 2)]);
            ok = knn_distance(y, dv, k) == want;

            std::vector<double> pair_dist;
            for (double a : draws)
                for (double b : draws) pair_dist.push_back(std::abs(a - b));
            std::sort(pair_dist.begin(), pair_dist.end());
            const std::size_t n2 = pair_dist.size();
            const double want_norm = n2 % 2 == 1
                                         ? pair_dist[n2 / 2]
                                         : 0.5 * (pair_dist[n2 / 2 - 1] + pair_dist[n2 / 2]);
            ok = ok && knn_normalizer(dv) == want_norm;
        }
        check("knn distance and normalizer match exhaustive computation", ok);
    }

    {
        Rng rng(4);
        GaussianKnown oracle{[](const std::vector<double>& x) { return std::sin(x[0]); },
                             [](const std::vector<double>& x) {
                                 return 0.2 + 0.15 * std::abs(std::sin(3.0 * x[0]));
                             },
                             100};
        Config cfg;
        std::vector<DrawRecord> calib, test;
        for (int i = 0; i < 700; ++i) {
            const std::vector<double> x{rng.uniform(0.0, 6.283185307179586)};
            DrawRecord rec;
            rec.id = std::to_string(i);
            const DrawVector dv = draw(OracleDGP{oracle}, x, rng);
            rec.draws = dv.draws;
            rec.y = oracle.mu_fn(x) + oracle.sigma_fn(x) * rng.normal();
            (i < 200 ? calib : test).push_back(std::move(rec));
        }
        bool ok = true;
        for (ScoreFamily fam : {ScoreFamily::Residual, ScoreFamily::Z}) {
            cfg.score.family = fam;
            const RunOutput res = run_pipeline(calib, test, cfg);
            const double bound = 0.9 - 3.0 * std::sqrt(0.09 / 500.0);
            ok = ok && res.report && res.report->picp >= bound;
        }
        check("gaussian oracle coverage clears the 3-sigma floor", ok);
    }

    out << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? kExitOk : 1;
}

}  // namespace dcp::cli
