#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcp/config.hpp"
#include "dcp/error.hpp"
#include "dcp/metrics.hpp"
#include "dcp/pipeline.hpp"

namespace dcp {

// Doubles are serialized with 17 significant digits so that every written
// value parses back to the identical bit pattern.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("null");
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::BadInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::BadInput, "cannot write '" + path + "'");
    out << content;
}

// ---- draw records (JSON lines) ----

inline DrawRecord parse_draw_record(const std::string& line, const std::string& where) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::BadInput, where + ": " + e.what());
    }
    if (!j.is_object()) raise(Errc::BadInput, where + ": record must be a JSON object");

    DrawRecord rec;
    if (!j.contains("id") || !j["id"].is_string())
        raise(Errc::BadInput, where + ": missing string field 'id'");
    rec.id = j["id"].get<std::string>();

    if (j.contains("y") && !j["y"].is_null()) {
        if (!j["y"].is_number()) raise(Errc::BadInput, where + ": 'y' must be a number or null");
        rec.y = j["y"].get<double>();
        if (!std::isfinite(*rec.y)) raise(Errc::BadInput, where + ": 'y' must be finite");
    }

    if (!j.contains("draws") || !j["draws"].is_array() || j["draws"].empty())
        raise(Errc::BadInput, where + ": 'draws' must be a non-empty array");
    for (const auto& d : j["draws"]) {
        if (!d.is_number()) raise(Errc::BadInput, where + ": 'draws' entries must be numbers");
        rec.draws.push_back(d.get<double>());
    }
    return rec;
}

inline std::vector<DrawRecord> parse_draw_records(std::istream& in, const std::string& name) {
    std::vector<DrawRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        out.push_back(parse_draw_record(line, name + ":" + std::to_string(lineno)));
    }
    return out;
}

inline std::vector<DrawRecord> load_draw_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::BadInput, "cannot open '" + path + "'");
    return parse_draw_records(in, path);
}

inline std::string serialize_draw_record(const DrawRecord& rec) {
    std::string out = "{\"id\":\"" + json_escape(rec.id) + "\",\"y\":";
    out += rec.y ? format_double(*rec.y) : "null";
    out += ",\"draws\":[";
    for (std::size_t i = 0; i < rec.draws.size(); ++i) {
        if (i) out += ',';
        out += format_double(rec.draws[i]);
    }
    out += "]}";
    return out;
}

// ---- interval rows (CSV) ----

inline const char* kCsvHeader = "id,y,low,up,status,width,covered,miss_error,winkler,qhat";

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

inline std::string serialize_row_csv(const RowResult& row, double alpha) {
    std::string out = csv_escape(row.id);
    out += ',';
    if (row.y) out += format_double(*row.y);
    out += ',';
    if (!row.error) {
        const auto& iv = row.interval;
        out += format_double(iv.low);
        out += ',';
        out += format_double(iv.up);
        out += ',';
        out += status_name(iv.status);
        out += ',';
        out += format_double(iv.width());
        out += ',';
        if (row.y) {
            const SampleEval e = make_sample_eval(*row.y, iv.low, iv.up, alpha);
            out += e.covered ? "1" : "0";
            out += ',';
            out += format_double(e.miss_error);
            out += ',';
            out += format_double(e.width + e.miss_error);
        } else {
            out += ",,";
        }
    } else {
        out += ",,error:";
        out += *row.error;
        out += ",,,,";
    }
    out += ',';
    out += format_double(row.qhat);
    return out;
}

inline std::string serialize_rows_csv(const std::vector<RowResult>& rows, double alpha) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& row : rows) {
        out += serialize_row_csv(row, alpha);
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

struct CsvIntervalRow {
    std::string id;
    std::optional<double> y;
    std::optional<double> low;
    std::optional<double> up;
    std::string status;
};

inline double parse_number(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        raise(Errc::BadInput, where + ": malformed number '" + s + "'");
    return v;
}

// Reads back an intervals CSV. Only id/y/low/up/status are consumed; the
// derived columns are recomputed downstream so the report path stays
// independent of what the producer wrote.
inline std::vector<CsvIntervalRow> parse_intervals_csv(std::istream& in,
                                                       const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) raise(Errc::BadInput, name + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    auto col = [&](const std::string& key) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == key) return i;
        }
        raise(Errc::BadInput, name + ": missing column '" + key + "'");
    };
    const std::size_t c_id = col("id"), c_y = col("y"), c_low = col("low"), c_up = col("up"),
                      c_status = col("status");

    std::vector<CsvIntervalRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineno);
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size())
            raise(Errc::BadInput, where + ": expected " + std::to_string(header.size()) +
                                      " fields, got " + std::to_string(f.size()));
        CsvIntervalRow row;
        row.id = f[c_id];
        row.status = f[c_status];
        if (!f[c_y].empty()) row.y = parse_number(f[c_y], where);
        if (!f[c_low].empty()) row.low = parse_number(f[c_low], where);
        if (!f[c_up].empty()) row.up = parse_number(f[c_up], where);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- evaluation report (flat JSON) ----

inline std::string serialize_report_fields(const std::optional<EvaluationReport>& rep) {
    std::string out;
    if (rep) {
        out += "\"n\":" + std::to_string(rep->n);
        out += ",\"picp\":" + format_double(rep->picp);
        out += ",\"c_a\":" + format_double(rep->c_a);
        out += ",\"pinaw\":" + format_optional(rep->pinaw);
        out += ",\"cv_width\":" + format_optional(rep->cv_width);
        out += ",\"mean_winkler\":" + format_double(rep->mean_winkler);
        out += ",\"p_uc\":" + format_double(rep->p_uc);
        out += ",\"mmw\":" + format_double(rep->mmw);
        out += ",\"xi\":" + format_double(rep->xi);
    } else {
        out +=
            "\"n\":0,\"picp\":null,\"c_a\":null,\"pinaw\":null,\"cv_width\":null,"
            "\"mean_winkler\":null,\"p_uc\":null,\"mmw\":null,\"xi\":null";
    }
    return out;
}

// ---- config (JSON) ----

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : keys) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) raise(Errc::BadInput, where + ": unknown key '" + key + "'");
    }
}

inline Config config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) raise(Errc::BadInput, "config: must be a JSON object");
    reject_unknown_keys(j, {"alpha", "zeta", "kappa", "online", "window_len", "score", "root"},
                        "config");
    Config cfg;
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("zeta")) cfg.zeta = j["zeta"].get<double>();
    if (j.contains("kappa")) cfg.kappa = j["kappa"].get<double>();
    if (j.contains("online")) cfg.online = j["online"].get<bool>();
    if (j.contains("window_len")) cfg.window_len = j["window_len"].get<int>();
    cfg.score.band_alpha = cfg.alpha;  // tracks alpha unless set explicitly

    if (j.contains("score")) {
        const auto& s = j["score"];
        reject_unknown_keys(
            s, {"family", "scaled", "k", "band_alpha", "sigma_floor", "width_floor"},
            "config.score");
        if (s.contains("family")) {
            const auto fam = family_from_name(s["family"].get<std::string>());
            if (!fam)
                raise(Errc::BadInput, "config.score: unknown family '" +
                                          s["family"].get<std::string>() + "'");
            cfg.score.family = *fam;
        }
        if (s.contains("scaled")) cfg.score.scaled = s["scaled"].get<bool>();
        if (s.contains("k")) cfg.score.k = s["k"].get<int>();
        if (s.contains("band_alpha")) cfg.score.band_alpha = s["band_alpha"].get<double>();
        if (s.contains("sigma_floor")) cfg.score.sigma_floor = s["sigma_floor"].get<double>();
        if (s.contains("width_floor")) cfg.score.width_floor = s["width_floor"].get<double>();
    }
    if (j.contains("root")) {
        const auto& r = j["root"];
        reject_unknown_keys(r,
                            {"h0", "gamma", "depth", "tol", "max_retries", "retry_h0_shrink",
                             "retry_depth_increase"},
                            "config.root");
        if (r.contains("h0")) cfg.root.h0 = r["h0"].get<double>();
        if (r.contains("gamma")) cfg.root.gamma = r["gamma"].get<double>();
        if (r.contains("depth")) cfg.root.depth = r["depth"].get<int>();
        if (r.contains("tol")) cfg.root.tol = r["tol"].get<double>();
        if (r.contains("max_retries")) cfg.root.max_retries = r["max_retries"].get<int>();
        if (r.contains("retry_h0_shrink"))
            cfg.root.retry_h0_shrink = r["retry_h0_shrink"].get<double>();
        if (r.contains("retry_depth_increase"))
            cfg.root.retry_depth_increase = r["retry_depth_increase"].get<int>();
    }
    return cfg;
}

inline Config load_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::BadInput, path + ": " + e.what());
    }
    return config_from_json(j);
}

inline std::string serialize_config(const Config& cfg) {
    std::string out = "{";
    out += "\"alpha\":" + format_double(cfg.alpha);
    out += ",\"zeta\":" + format_double(cfg.zeta);
    out += ",\"kappa\":" + format_double(cfg.kappa);
    out += ",\"online\":" + std::string(cfg.online ? "true" : "false");
    out += ",\"window_len\":" + std::to_string(cfg.window_len);
    out += ",\"score\":{";
    out += "\"family\":\"" + std::string(family_name(cfg.score.family)) + "\"";
    out += ",\"scaled\":" + std::string(cfg.score.scaled ? "true" : "false");
    out += ",\"k\":" + std::to_string(cfg.score.k);
    out += ",\"band_alpha\":" + format_double(cfg.score.band_alpha);
    out += ",\"sigma_floor\":" + format_double(cfg.score.sigma_floor);
    out += ",\"width_floor\":" + format_double(cfg.score.width_floor);
    out += "},\"root\":{";
    out += "\"h0\":" + format_double(cfg.root.h0);
    out += ",\"gamma\":" + format_double(cfg.root.gamma);
    out += ",\"depth\":" + std::to_string(cfg.root.depth);
    out += ",\"tol\":" + format_double(cfg.root.tol);
    out += ",\"max_retries\":" + std::to_string(cfg.root.max_retries);
    out += ",\"retry_h0_shrink\":" + format_double(cfg.root.retry_h0_shrink);
    out += ",\"retry_depth_increase\":" + std::to_string(cfg.root.retry_depth_increase);
    out += "}}";
    return out;
}

}  // namespace dcp
