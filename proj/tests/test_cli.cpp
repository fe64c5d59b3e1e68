#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dcp/cli.hpp"
#include "dcp/io.hpp"
#include "dcp/rng.hpp"

using namespace dcp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dcp_test_" + std::to_string(Catch::rngSeed()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int rc = dcp::cli::dispatch(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return rc;
}

// Synthetic heteroscedastic records: draws and target share the same normal.
void write_gaussian_records(const std::string& path, std::size_t n, std::uint64_t seed,
                            double sigma_scale = 1.0, std::size_t scale_after = SIZE_MAX) {
    Rng rng(seed);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = std::sin(0.01 * static_cast<double>(i));
        double sigma = 0.1 + 0.05 * std::abs(std::cos(0.03 * static_cast<double>(i)));
        if (i >= scale_after) sigma *= sigma_scale;
        DrawRecord rec;
        rec.id = "r" + std::to_string(i);
        rec.draws.resize(64);
        for (double& d : rec.draws) d = rng.normal(mu, sigma);
        rec.y = rng.normal(mu, sigma);
        text += serialize_draw_record(rec) + "\n";
    }
    write_file(path, text);
}

}  // namespace

TEST_CASE("synth presets write the four benchmark files") {
    TempDir dir;
    std::string text;
    const int rc = run_cli({"synth", "--preset", "aleatoric", "--out-dir", dir.path.string(),
                            "--seed", "3"},
                           &text);
    REQUIRE(rc == 0);
    CHECK(text.find("series: 8640 samples") != std::string::npos);

    const auto series = read_file(dir / "series.jsonl");
    CHECK(std::count(series.begin(), series.end(), '\n') == 8640);

    const std::vector<DrawRecord> pairs = load_draw_records(dir / "pairs.jsonl");
    CHECK(pairs.size() == 8637);  // 8640 - lookback 3 - horizon 1 + 1
    CHECK(pairs.front().draws.size() == 3);

    const std::vector<DrawRecord> calib = load_draw_records(dir / "calib.jsonl");
    const std::vector<DrawRecord> test = load_draw_records(dir / "test.jsonl");
    CHECK(calib.size() == 1727);
    CHECK(test.size() == 865);
    CHECK(calib.front().draws.size() == 100);
    // Chronology is preserved through the record ids.
    CHECK(calib.front().id == "c" + std::to_string(6045 + 3));
}

TEST_CASE("synth epistemic preset keeps the clean tail shifted") {
    TempDir dir;
    REQUIRE(run_cli({"synth", "--preset", "epistemic", "--out-dir", dir.path.string()}) == 0);
    const std::vector<DrawRecord> test = load_draw_records(dir / "test.jsonl");
    CHECK(test.size() == 289);  // last tenth of 2877 pairs, floor boundaries
}

TEST_CASE("synth rejects invalid split fractions with exit code 2") {
    TempDir dir;
    write_file(dir / "spec.json", R"({
        "harmonics": [{"amplitude": 1, "frequency": 1, "phase": 0}],
        "days": 2, "samples_per_day": 48,
        "split": {"horizon": 1, "lookback": 3, "fractions": [0.7, 0.2, 0.2]}
    })");
    std::string text;
    CHECK(run_cli({"synth", "--spec", dir / "spec.json", "--out-dir", dir.path.string()}, &text) ==
          2);
    CHECK(text.find("fractions") != std::string::npos);
}

TEST_CASE("run produces intervals and a report; analytic matches numeric") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 300, 7);
    write_gaussian_records(dir / "test.jsonl", 150, 8);

    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--score", "residual",
                     "--out-csv", dir / "num.csv", "--out-report", dir / "num.json"}) == 0);
    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--score", "residual",
                     "--analytic", "--out-csv", dir / "ana.csv", "--out-report",
                     dir / "ana.json"}) == 0);

    std::istringstream num_in(read_file(dir / "num.csv")), ana_in(read_file(dir / "ana.csv"));
    const auto num = parse_intervals_csv(num_in, "num.csv");
    const auto ana = parse_intervals_csv(ana_in, "ana.csv");
    REQUIRE(num.size() == ana.size());
    REQUIRE(num.size() == 150);
    for (std::size_t i = 0; i < num.size(); ++i) {
        CHECK(std::abs(*num[i].low - *ana[i].low) <= 1e-8);
        CHECK(std::abs(*num[i].up - *ana[i].up) <= 1e-8);
    }
}

TEST_CASE("online qhat trace is nondecreasing through a noise jump") {
    TempDir dir;
    // Residual scores are |y - mean(draws)|; the target offsets control them
    // almost exactly, and the second half of the test stream doubles them.
    auto write_offset_records = [](const std::string& path, std::size_t n, std::uint64_t seed,
                                   std::size_t jump_after) {
        Rng rng(seed);
        std::string text;
        for (std::size_t i = 0; i < n; ++i) {
            const double mu = std::sin(0.01 * static_cast<double>(i));
            double offset = 0.3 + 0.3 * rng.uniform01();
            if (i >= jump_after) offset = 2.0 * offset + 0.4 + 0.002 * static_cast<double>(i);
            DrawRecord rec;
            rec.id = "r" + std::to_string(i);
            rec.draws.resize(64);
            for (double& d : rec.draws) d = rng.normal(mu, 0.05);
            rec.y = mu + (i % 2 == 0 ? offset : -offset);
            text += serialize_draw_record(rec) + "\n";
        }
        write_file(path, text);
    };
    write_offset_records(dir / "calib.jsonl", 200, 17, SIZE_MAX);
    write_offset_records(dir / "test.jsonl", 200, 18, 100);

    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--score", "residual",
                     "--online", "--out-csv", dir / "iv.csv", "--out-report",
                     dir / "rep.json"}) == 0);

    const std::string csv = read_file(dir / "iv.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> qhat;
    while (std::getline(in, line)) {
        const auto fields = split_csv_line(line);
        qhat.push_back(parse_number(fields.back(), "qhat"));
    }
    REQUIRE(qhat.size() == 200);
    // Transition region: the window absorbs the doubled-noise scores.
    for (std::size_t i = 100; i < 140; ++i) CHECK(qhat[i + 1] >= qhat[i]);
    CHECK(qhat.back() > qhat.front());
}

TEST_CASE("empty test file yields an empty csv and a null report") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 100, 9);
    write_file(dir / "test.jsonl", "");
    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--out-csv", dir / "iv.csv",
                     "--out-report", dir / "rep.json"}) == 0);
    CHECK(read_file(dir / "iv.csv") == std::string(kCsvHeader) + "\n");
    const auto rep = nlohmann::json::parse(read_file(dir / "rep.json"));
    CHECK(rep["n"] == 0);
    CHECK(rep["picp"].is_null());
    CHECK(rep["mmw"].is_null());
}

TEST_CASE("insufficient calibration exits with code 3") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 3, 10);
    write_gaussian_records(dir / "test.jsonl", 5, 11);
    CHECK(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--alpha", "0.1"}) == 3);
}

TEST_CASE("schema errors exit with code 2") {
    TempDir dir;
    write_file(dir / "calib.jsonl", "{\"id\":\"a\",\"draws\":[1,2]}\nnot json\n");
    write_gaussian_records(dir / "test.jsonl", 5, 12);
    std::string text;
    CHECK(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl"}, &text) == 2);
    CHECK(text.find("calib.jsonl:2") != std::string::npos);
    CHECK(run_cli({"run", dir / "missing.jsonl", dir / "test.jsonl"}) == 2);
    CHECK(run_cli({"definitely-not-a-subcommand"}) == 2);
}

TEST_CASE("per-record score failures keep the run alive") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 100, 13);
    // Second test record has fewer draws than k.
    write_file(dir / "test.jsonl",
               serialize_draw_record({"ok", 0.1, std::vector<double>(32, 0.1)}) + "\n" +
                   serialize_draw_record({"short", 0.1, {1.0, 2.0}}) + "\n");
    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--score", "knn", "--k", "10",
                     "--out-csv", dir / "iv.csv", "--out-report", dir / "rep.json"}) == 0);
    std::istringstream in(read_file(dir / "iv.csv"));
    const auto rows = parse_intervals_csv(in, "iv.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "two_sided");
    CHECK(rows[1].status.rfind("error:KTooLarge", 0) == 0);
    const auto rep = nlohmann::json::parse(read_file(dir / "rep.json"));
    CHECK(rep["n"] == 1);
}

TEST_CASE("config file drives the run and flags override it") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 200, 14);
    write_gaussian_records(dir / "test.jsonl", 50, 15);
    write_file(dir / "cfg.json", R"({"alpha": 0.2, "score": {"family": "qis"}})");

    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--config", dir / "cfg.json",
                     "--out-csv", dir / "a.csv", "--out-report", dir / "a.json"}) == 0);
    const auto rep = nlohmann::json::parse(read_file(dir / "a.json"));
    CHECK(rep["manifest"]["config"]["alpha"] == 0.2);
    CHECK(rep["manifest"]["config"]["score"]["family"] == "qis");

    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--config", dir / "cfg.json",
                     "--score", "hdi", "--out-csv", dir / "b.csv", "--out-report",
                     dir / "b.json"}) == 0);
    const auto rep2 = nlohmann::json::parse(read_file(dir / "b.json"));
    CHECK(rep2["manifest"]["config"]["score"]["family"] == "hdi");
    CHECK(rep2["manifest"]["config"]["alpha"] == 0.2);
}

TEST_CASE("report recomputes the run report field for field") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 250, 19);
    write_gaussian_records(dir / "test.jsonl", 120, 20);
    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--score", "z", "--out-csv",
                     dir / "iv.csv", "--out-report", dir / "run.json"}) == 0);
    REQUIRE(run_cli({"report", dir / "iv.csv", "--out-report", dir / "rep.json"}) == 0);

    const auto a = nlohmann::json::parse(read_file(dir / "run.json"));
    const auto b = nlohmann::json::parse(read_file(dir / "rep.json"));
    for (const char* key : {"n", "picp", "c_a", "pinaw", "cv_width", "mean_winkler", "p_uc",
                            "mmw", "xi"}) {
        INFO(key);
        CHECK(a[key] == b[key]);
    }
}

TEST_CASE("report reproduces the hand-computed mmw example") {
    // Nine unit-width covered rows plus one miss by 0.1 at alpha 0.1.
    TempDir dir;
    std::string csv = std::string(kCsvHeader) + "\n";
    for (int i = 0; i < 9; ++i) {
        const double y = i;
        csv += "s" + std::to_string(i) + "," + format_double(y) + "," + format_double(y - 0.5) +
               "," + format_double(y + 0.5) + ",two_sided,1,1,0,1,0\n";
    }
    csv += "s9,20.1,19,20,two_sided,1,0,2,3,0\n";
    write_file(dir / "iv.csv", csv);
    REQUIRE(run_cli({"report", dir / "iv.csv", "--out-report", dir / "rep.json"}) == 0);
    const auto rep = nlohmann::json::parse(read_file(dir / "rep.json"));
    CHECK(rep["picp"] == 0.9);
    CHECK(rep["p_uc"] == 1.0);
    CHECK(rep["mmw"].get<double>() == Catch::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("report of an all-covered csv has unit penalty") {
    TempDir dir;
    std::string csv = std::string(kCsvHeader) + "\n";
    for (int i = 0; i < 5; ++i) {
        const double y = i;
        csv += "s" + std::to_string(i) + "," + format_double(y) + "," + format_double(y - 1.0) +
               "," + format_double(y + 1.0) + ",two_sided,2,1,0,2,0\n";
    }
    write_file(dir / "iv.csv", csv);
    REQUIRE(run_cli({"report", dir / "iv.csv", "--out-report", dir / "rep.json"}) == 0);
    const auto rep = nlohmann::json::parse(read_file(dir / "rep.json"));
    CHECK(rep["p_uc"] == 1.0);
    CHECK(rep["picp"] == 1.0);
}

TEST_CASE("malformed csv exits with code 2") {
    TempDir dir;
    write_file(dir / "bad.csv", "id,but,not,the,right,columns\n1,2,3,4,5,6\n");
    CHECK(run_cli({"report", dir / "bad.csv"}) == 2);
}

TEST_CASE("run outputs are byte-identical across reruns") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 150, 23);
    write_gaussian_records(dir / "test.jsonl", 60, 24);
    for (const char* mode : {"static", "online"}) {
        std::vector<std::string> args{"run",     dir / "calib.jsonl", dir / "test.jsonl",
                                      "--score", "qis",               "--seed",
                                      "42"};
        if (std::string(mode) == "online") args.push_back("--online");
        std::vector<std::string> a1 = args;
        a1.insert(a1.end(), {"--out-csv", dir / "1.csv", "--out-report", dir / "1.json"});
        std::vector<std::string> a2 = args;
        a2.insert(a2.end(), {"--out-csv", dir / "2.csv", "--out-report", dir / "2.json"});
        REQUIRE(run_cli(a1) == 0);
        REQUIRE(run_cli(a2) == 0);
        CHECK(read_file(dir / "1.csv") == read_file(dir / "2.csv"));
        CHECK(read_file(dir / "1.json") == read_file(dir / "2.json"));
    }
}

TEST_CASE("dcp_seed environment variable seeds the manifest") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 100, 25);
    write_gaussian_records(dir / "test.jsonl", 10, 26);
    setenv("DCP_SEED", "777", 1);
    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--out-csv", dir / "iv.csv",
                     "--out-report", dir / "rep.json"}) == 0);
    unsetenv("DCP_SEED");
    const auto rep = nlohmann::json::parse(read_file(dir / "rep.json"));
    CHECK(rep["manifest"]["seed"] == 777);
}

TEST_CASE("window_len caps the calibration window to the most recent scores") {
    Rng rng(27);
    std::vector<DrawRecord> calib, test;
    for (int i = 0; i < 100; ++i) {
        DrawRecord rec;
        rec.id = std::to_string(i);
        rec.draws = {0.0, 1.0};  // mean 0.5
        rec.y = 0.5 + (i < 50 ? 0.75 : 0.25);  // residual scores drop halfway
        calib.push_back(rec);
    }
    DrawRecord probe;
    probe.id = "t";
    probe.draws = {0.0, 1.0};
    probe.y = 0.5;
    test.push_back(probe);

    Config cfg;
    cfg.alpha = 0.2;
    const RunOutput full = run_pipeline(calib, test, cfg);
    CHECK(full.initial_qhat == 0.75);  // old large scores still in range

    cfg.window_len = 50;  // only the most recent, small scores remain
    CHECK(run_pipeline(calib, test, cfg).initial_qhat == 0.25);
    cfg.window_len = 40;
    CHECK(run_pipeline(calib, test, cfg).initial_qhat == 0.25);
    cfg.window_len = 200;  // cap above the record count is a no-op
    CHECK(run_pipeline(calib, test, cfg).initial_qhat == 0.75);
}

TEST_CASE("analytic flag falls back to the numeric path for knn") {
    TempDir dir;
    write_gaussian_records(dir / "calib.jsonl", 120, 28);
    write_gaussian_records(dir / "test.jsonl", 30, 29);
    REQUIRE(run_cli({"run", dir / "calib.jsonl", dir / "test.jsonl", "--score", "knn",
                     "--analytic", "--out-csv", dir / "iv.csv", "--out-report",
                     dir / "rep.json"}) == 0);
    std::istringstream in(read_file(dir / "iv.csv"));
    const auto rows = parse_intervals_csv(in, "iv.csv");
    for (const auto& row : rows) CHECK(row.status.rfind("error:", 0) != 0);
}

TEST_CASE("selftest passes") {
    std::string text;
    CHECK(run_cli({"selftest"}, &text) == 0);
    CHECK(text.find("[FAIL]") == std::string::npos);
}
